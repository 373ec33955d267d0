#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace pconf {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Feature expansion phi(x).
//   AffineInput:    phi(x) = [x; 1], so alpha carries the weights plus a
//                   trailing bias coordinate.
//   GaussianKernel: phi_j(x) = exp(-gamma * ||x - c_j||^2) over a fixed set
//                   of centers.
enum class BasisKind { AffineInput, GaussianKernel };

class Basis {
 public:
  Basis() = default;  // empty affine basis; featurize rejects any pattern

  static Basis affine(int input_dim);
  static Basis gaussian(Mat centers, double gamma);

  // Standard kernel-model construction: centers are a seeded random
  // subsample (without replacement) of the given patterns.
  static Basis gaussian_from_subsample(const std::vector<Vec>& patterns,
                                       int center_count, double gamma,
                                       std::uint64_t seed);

  BasisKind kind() const { return kind_; }
  int input_dim() const { return input_dim_; }
  int feature_dim() const;
  const Mat& centers() const { return centers_; }
  double gamma() const { return gamma_; }

  Vec featurize(const Vec& x) const;

 private:
  BasisKind kind_ = BasisKind::AffineInput;
  int input_dim_ = 0;
  Mat centers_;  // rows are centers
  double gamma_ = 0.0;
};

Vec featurize(const Basis& basis, const Vec& x);

// g(x) = alpha . phi(x) - margin_offset. The offset is zero for trained
// classifiers; the confidence-regression fit sets it to 0.5 so that the
// sign rule implements "predict +1 iff the fitted confidence exceeds 1/2".
struct LinearModel {
  Basis basis;
  Vec alpha;
  double margin_offset = 0.0;

  double margin(const Vec& x) const;
  int predict(const Vec& x) const;  // +1 / -1; zero margin counts as -1
};

double predict_margin(const LinearModel& model, const Vec& x);
int predict_label(const LinearModel& model, const Vec& x);

// Penalty (lambda/2) alpha^T R alpha with R one of:
//   Identity            R = I
//   IdentityExceptBias  R = I with a zero row/column on the last coordinate
//                       (the affine bias; for kernel bases prefer Identity)
//   ExplicitMatrix      user-supplied symmetric PSD matrix, validated at
//                       construction by an LDLT factorization (tol 1e-10)
enum class RegKind { Identity, IdentityExceptBias, ExplicitMatrix };

class Regularizer {
 public:
  Regularizer() : Regularizer(0.0, RegKind::Identity) {}
  Regularizer(double lambda, RegKind kind);
  Regularizer(double lambda, Mat matrix);  // ExplicitMatrix

  double lambda() const { return lambda_; }
  RegKind kind() const { return kind_; }

  double value(const Vec& alpha) const;
  Vec grad(const Vec& alpha) const;

 private:
  double lambda_ = 0.0;
  RegKind kind_ = RegKind::Identity;
  Mat matrix_;
};

// (value, gradient) in one call; matches the shape used by the risk module.
std::pair<double, Vec> regularization_value_and_grad(const Regularizer& reg,
                                                     const Vec& alpha);

// Plain-text model records. Doubles are printed with 17 significant digits
// so save/load round-trips bit-exactly.
void save_model(const LinearModel& model, const std::string& path);
LinearModel load_model(const std::string& path);
void write_model(const LinearModel& model, std::ostream& out);
LinearModel read_model(std::istream& in);

}  // namespace pconf
