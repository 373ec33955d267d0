#include "pconf/stats.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace pconf {

double mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean: empty sample");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) throw std::invalid_argument("sample_variance: need >= 2 values");
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

double sample_stddev(std::span<const double> xs) {
  return std::sqrt(sample_variance(xs));
}

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2)
    throw std::invalid_argument("welch_t_test: both samples need >= 2 values");

  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double ma = mean(a), mb = mean(b);
  const double va = sample_variance(a), vb = sample_variance(b);

  const double sa = va / na, sb = vb / nb;
  if (sa + sb == 0.0) {
    // Degenerate: no variance anywhere.
    if (ma == mb) return {0.0, na + nb - 2.0, 1.0, false};
    return {ma > mb ? std::numeric_limits<double>::infinity()
                    : -std::numeric_limits<double>::infinity(),
            na + nb - 2.0, 0.0, true};
  }

  const double t = (ma - mb) / std::sqrt(sa + sb);
  const double dof =
      (sa + sb) * (sa + sb) / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
  boost::math::students_t dist(dof);
  const double p = 2.0 * boost::math::cdf(dist, -std::abs(t));
  return {t, dof, p, p < 0.05};
}

}  // namespace pconf
