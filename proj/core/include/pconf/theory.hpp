#pragma once

#include <span>

#include "pconf/loss.hpp"
#include "pconf/risk.hpp"

namespace pconf {

// Inputs to the uniform-deviation and estimation-error bounds.
struct BoundInputs {
  double n;           // sample count
  double pi_plus;     // class prior
  double c_r;         // confidence floor, in (0,1]
  double c_ell;       // loss bound over the margin range
  double l_ell;       // loss Lipschitz constant over the margin range
  double rademacher;  // R_n(G)
  double delta;       // confidence level, in (0,1)
};

// R_n(G) <= c_w c_phi / sqrt(n) for norm-bounded linear classes.
double rademacher_linear(double c_w, double c_phi, double n);

// With probability >= 1 - delta,
//   sup_g |Rhat(g) - R(g)| <= 2 pi+ (L + L/C_r) R_n
//                           + pi+ (C + C/C_r) sqrt(ln(2/delta) / (2n)).
double uniform_deviation_bound(const BoundInputs& b);

// Exactly twice the uniform deviation bound.
double estimation_error_bound(const BoundInputs& b);

// Constants measured from a model class and a dataset:
//   c_phi = max_i ||phi(x_i)||, c_g = c_w * c_phi,
//   (c_ell, l_ell) from loss_constants, c_r = max(min_i r_i, floor).
struct EmpiricalConstants {
  double c_phi;
  double c_g;
  double c_ell;
  double l_ell;
  double c_r;
};

EmpiricalConstants empirical_constants(const Basis& basis, double c_w,
                                       std::span<const PconfSample> dataset,
                                       LossKind loss, double floor = 0.01);

}  // namespace pconf
