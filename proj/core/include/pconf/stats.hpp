#pragma once

#include <span>

namespace pconf {

// Welch's unequal-variance two-sided t-test with Welch-Satterthwaite
// degrees of freedom. Conventions for degenerate inputs (both samples
// zero-variance): equal means -> p = 1, unequal means -> p = 0.
struct WelchResult {
  double t;
  double dof;
  double p_value;
  bool significant_5pct;
};

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

double mean(std::span<const double> xs);
double sample_variance(std::span<const double> xs);  // ddof = 1
double sample_stddev(std::span<const double> xs);

}  // namespace pconf
