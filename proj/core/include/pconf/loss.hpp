#pragma once

#include <string>

namespace pconf {

// Margin losses l(z). ZeroOne is an evaluation metric only and is rejected
// by every training path.
enum class LossKind { Logistic, Squared, Hinge, Ramp, ZeroOne };

// l(z). Logistic is computed as softplus(-z) in the overflow-safe split
// form, exact for all |z| <= 700. Zero-one counts the tie z == 0 as an
// error. Throws std::domain_error on non-finite z.
double loss_value(LossKind kind, double z);

// dl/dz. At the hinge/ramp kinks the zero subgradient is returned, so a
// converged optimizer is stationary there. ZeroOne is unsupported.
double loss_grad(LossKind kind, double z);

// Bounds for the margin interval [-c_g, c_g]:
//   c_ell = sup l(z), l_ell = a valid (not necessarily tight) Lipschitz
// constant. Requires c_g > 0 and a trainable loss.
struct LossBounds {
  double c_ell;
  double l_ell;
};
LossBounds loss_constants(LossKind kind, double c_g);

// CLI/file spellings: "logistic", "squared", "hinge", "ramp", "zero-one".
std::string to_string(LossKind kind);
LossKind loss_from_string(const std::string& name);

}  // namespace pconf
