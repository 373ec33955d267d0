#include "pconf/theory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pconf {

namespace {

void check_inputs(const BoundInputs& b) {
  if (!(b.n > 0.0)) throw std::domain_error("bound: n must be positive");
  if (!(b.pi_plus > 0.0)) throw std::domain_error("bound: pi_plus must be positive");
  if (!(b.c_r > 0.0 && b.c_r <= 1.0))
    throw std::domain_error("bound: c_r must be in (0,1]");
  if (!(b.c_ell > 0.0)) throw std::domain_error("bound: c_ell must be positive");
  if (!(b.l_ell > 0.0)) throw std::domain_error("bound: l_ell must be positive");
  if (!(b.rademacher >= 0.0))
    throw std::domain_error("bound: rademacher must be non-negative");
  if (!(b.delta > 0.0 && b.delta < 1.0))
    throw std::domain_error("bound: delta must be in (0,1)");
}

}  // namespace

double rademacher_linear(double c_w, double c_phi, double n) {
  if (!(c_w > 0.0) || !(c_phi > 0.0))
    throw std::domain_error("rademacher_linear: c_w and c_phi must be positive");
  if (!(n >= 1.0)) throw std::domain_error("rademacher_linear: n must be >= 1");
  return c_w * c_phi / std::sqrt(n);
}

double uniform_deviation_bound(const BoundInputs& b) {
  check_inputs(b);
  const double complexity_term =
      2.0 * b.pi_plus * (b.l_ell + b.l_ell / b.c_r) * b.rademacher;
  const double concentration_term =
      b.pi_plus * (b.c_ell + b.c_ell / b.c_r) *
      std::sqrt(std::log(2.0 / b.delta) / (2.0 * b.n));
  return complexity_term + concentration_term;
}

double estimation_error_bound(const BoundInputs& b) {
  return 2.0 * uniform_deviation_bound(b);
}

EmpiricalConstants empirical_constants(const Basis& basis, double c_w,
                                       std::span<const PconfSample> dataset,
                                       LossKind loss, double floor) {
  if (dataset.empty())
    throw std::invalid_argument("empirical_constants: empty dataset");
  if (!(c_w > 0.0)) throw std::domain_error("empirical_constants: c_w must be positive");

  double c_phi = 0.0;
  double min_r = 1.0;
  for (const auto& s : dataset) {
    c_phi = std::max(c_phi, basis.featurize(s.x).norm());
    min_r = std::min(min_r, s.r);
  }
  EmpiricalConstants out;
  out.c_phi = c_phi;
  out.c_g = c_w * c_phi;
  const LossBounds lb = loss_constants(loss, out.c_g);
  out.c_ell = lb.c_ell;
  out.l_ell = lb.l_ell;
  out.c_r = std::max(min_r, floor);  // the theory licenses trimming upward
  return out;
}

}  // namespace pconf
