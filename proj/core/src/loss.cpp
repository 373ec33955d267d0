#include "pconf/loss.hpp"

#include <cmath>
#include <stdexcept>

namespace pconf {

namespace {

// softplus(x) = log(1 + e^x), split so the exponential never overflows.
double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

double loss_value(LossKind kind, double z) {
  if (!std::isfinite(z)) throw std::domain_error("loss_value: non-finite margin");
  switch (kind) {
    case LossKind::Logistic:
      return softplus(-z);
    case LossKind::Squared:
      return (z - 1.0) * (z - 1.0);
    case LossKind::Hinge:
      return std::max(0.0, 1.0 - z);
    case LossKind::Ramp:
      return std::min(1.0, std::max(0.0, 1.0 - z));
    case LossKind::ZeroOne:
      return z <= 0.0 ? 1.0 : 0.0;
  }
  throw std::domain_error("loss_value: unknown loss");
}

double loss_grad(LossKind kind, double z) {
  if (!std::isfinite(z)) throw std::domain_error("loss_grad: non-finite margin");
  switch (kind) {
    case LossKind::Logistic:
      return -sigmoid(-z);
    case LossKind::Squared:
      return 2.0 * (z - 1.0);
    case LossKind::Hinge:
      return z < 1.0 ? -1.0 : 0.0;
    case LossKind::Ramp:
      return (z > 0.0 && z < 1.0) ? -1.0 : 0.0;
    case LossKind::ZeroOne:
      throw std::domain_error("loss_grad: zero-one loss has no usable gradient");
  }
  throw std::domain_error("loss_grad: unknown loss");
}

LossBounds loss_constants(LossKind kind, double c_g) {
  if (!(c_g > 0.0) || !std::isfinite(c_g))
    throw std::domain_error("loss_constants: c_g must be positive and finite");
  switch (kind) {
    case LossKind::Logistic:
      // sup over [-c_g, c_g] is at z = -c_g; |l'| <= 1 everywhere.
      return {softplus(c_g), 1.0};
    case LossKind::Squared:
      return {(c_g + 1.0) * (c_g + 1.0), 2.0 * (c_g + 1.0)};
    case LossKind::Hinge:
      return {1.0 + c_g, 1.0};
    case LossKind::Ramp:
      return {1.0, 1.0};
    case LossKind::ZeroOne:
      throw std::domain_error("loss_constants: zero-one loss is not a training loss");
  }
  throw std::domain_error("loss_constants: unknown loss");
}

std::string to_string(LossKind kind) {
  switch (kind) {
    case LossKind::Logistic: return "logistic";
    case LossKind::Squared: return "squared";
    case LossKind::Hinge: return "hinge";
    case LossKind::Ramp: return "ramp";
    case LossKind::ZeroOne: return "zero-one";
  }
  return "unknown";
}

LossKind loss_from_string(const std::string& name) {
  if (name == "logistic") return LossKind::Logistic;
  if (name == "squared") return LossKind::Squared;
  if (name == "hinge") return LossKind::Hinge;
  if (name == "ramp") return LossKind::Ramp;
  if (name == "zero-one" || name == "zeroone") return LossKind::ZeroOne;
  throw std::domain_error("unknown loss name: " + name);
}

}  // namespace pconf
