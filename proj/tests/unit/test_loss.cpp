#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pconf/loss.hpp"

using pconf::LossKind;
using pconf::loss_constants;
using pconf::loss_grad;
using pconf::loss_value;

namespace {

const std::vector<LossKind> kTrainable = {LossKind::Logistic, LossKind::Squared,
                                          LossKind::Hinge, LossKind::Ramp};

bool near_kink(LossKind kind, double z, double h) {
  if (kind == LossKind::Hinge) return std::abs(z - 1.0) < 2 * h;
  if (kind == LossKind::Ramp)
    return std::abs(z - 1.0) < 2 * h || std::abs(z) < 2 * h;
  return false;
}

}  // namespace

TEST_CASE("loss values at pinned points") {
  CHECK(loss_value(LossKind::Logistic, 0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(loss_value(LossKind::Squared, 1.0) == 0.0);
  CHECK(loss_value(LossKind::Ramp, -5.0) == 1.0);
  CHECK(loss_value(LossKind::Ramp, 0.5) == 0.5);
  CHECK(loss_value(LossKind::Hinge, 2.0) == 0.0);
  // high-precision reference: log1p(exp(-10))
  CHECK(loss_value(LossKind::Logistic, 10.0) ==
        doctest::Approx(4.5398899216864646769487829307105596781e-5).epsilon(1e-13));
  CHECK(loss_value(LossKind::ZeroOne, 0.0) == 1.0);  // tie counts as error
  CHECK(loss_value(LossKind::ZeroOne, 1e-12) == 0.0);
  CHECK(loss_value(LossKind::ZeroOne, -3.0) == 1.0);
}

TEST_CASE("loss gradients at pinned points") {
  CHECK(loss_grad(LossKind::Logistic, 0.0) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(loss_grad(LossKind::Squared, 0.0) == -2.0);
  CHECK(loss_grad(LossKind::Hinge, 1.0) == 0.0);  // chosen subgradient
  CHECK(loss_grad(LossKind::Ramp, 0.0) == 0.0);
  CHECK(loss_grad(LossKind::Ramp, 1.0) == 0.0);
  CHECK(loss_grad(LossKind::Ramp, 0.5) == -1.0);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(loss_value(LossKind::Logistic, std::nan("")), std::domain_error);
  CHECK_THROWS_AS(loss_value(LossKind::Hinge, INFINITY), std::domain_error);
  CHECK_THROWS_AS(loss_grad(LossKind::ZeroOne, 0.5), std::domain_error);
  CHECK_THROWS_AS(loss_constants(LossKind::ZeroOne, 1.0), std::domain_error);
  CHECK_THROWS_AS(loss_constants(LossKind::Logistic, 0.0), std::domain_error);
  CHECK_THROWS_AS(loss_constants(LossKind::Logistic, -2.0), std::domain_error);
}

TEST_CASE("gradients match central finite differences away from kinks") {
  const double h = 1e-4;
  for (LossKind kind : kTrainable) {
    for (double z = -6.0; z <= 6.0; z += 0.0917) {
      if (near_kink(kind, z, h)) continue;
      const double fd = (loss_value(kind, z + h) - loss_value(kind, z - h)) / (2 * h);
      CHECK_MESSAGE(std::abs(loss_grad(kind, z) - fd) <= 1e-5,
                    "loss ", pconf::to_string(kind), " at z=", z);
    }
  }
}

TEST_CASE("losses are non-negative") {
  for (LossKind kind : {LossKind::Logistic, LossKind::Squared, LossKind::Hinge,
                        LossKind::Ramp, LossKind::ZeroOne}) {
    for (double z = -30.0; z <= 30.0; z += 0.37) {
      CHECK(loss_value(kind, z) >= 0.0);
    }
  }
}

TEST_CASE("logistic matches softplus(-z) and survives large margins") {
  // reference evaluated in long double to keep the oracle independent
  for (double z = -50.0; z <= 50.0; z += 0.5) {
    const long double ref = logl(1.0L + expl(-static_cast<long double>(z)));
    const double got = loss_value(LossKind::Logistic, z);
    CHECK(std::abs(got - static_cast<double>(ref)) <=
          1e-12 * std::max(1.0, std::abs(static_cast<double>(ref))));
  }
  CHECK(std::isfinite(loss_value(LossKind::Logistic, 700.0)));
  CHECK(std::isfinite(loss_value(LossKind::Logistic, -700.0)));
  CHECK(loss_value(LossKind::Logistic, -700.0) == doctest::Approx(700.0));
}

TEST_CASE("loss_constants at pinned points") {
  const auto ramp = loss_constants(LossKind::Ramp, 3.7);
  CHECK(ramp.c_ell == 1.0);
  CHECK(ramp.l_ell == 1.0);

  const auto logi = loss_constants(LossKind::Logistic, 1.0);
  CHECK(logi.c_ell == doctest::Approx(1.3132616875182228).epsilon(1e-14));
  CHECK(logi.l_ell == 1.0);

  const auto sq = loss_constants(LossKind::Squared, 2.0);
  CHECK(sq.c_ell == 9.0);
  CHECK(sq.l_ell == 6.0);
}

TEST_CASE("loss_constants dominate a grid scan of values and secants") {
  for (LossKind kind : kTrainable) {
    for (double c_g : {0.5, 1.0, 2.5}) {
      const auto lb = loss_constants(kind, c_g);
      const double step = 1e-3;
      double prev = loss_value(kind, -c_g);
      CHECK(prev <= lb.c_ell + 1e-12);
      for (double z = -c_g + step; z <= c_g + 1e-12; z += step) {
        const double v = loss_value(kind, z);
        CHECK(v <= lb.c_ell + 1e-12);
        CHECK(std::abs(v - prev) / step <= lb.l_ell + 1e-9);
        prev = v;
      }
    }
  }
}

TEST_CASE("loss names round-trip") {
  for (LossKind kind : {LossKind::Logistic, LossKind::Squared, LossKind::Hinge,
                        LossKind::Ramp, LossKind::ZeroOne}) {
    CHECK(pconf::loss_from_string(pconf::to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(pconf::loss_from_string("huber"), std::domain_error);
}
