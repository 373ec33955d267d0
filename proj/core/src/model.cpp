#include "pconf/model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "pconf/errors.hpp"
#include "pconf/rng.hpp"

namespace pconf {

Basis Basis::affine(int input_dim) {
  if (input_dim < 1) throw std::domain_error("Basis::affine: input_dim must be >= 1");
  Basis b;
  b.kind_ = BasisKind::AffineInput;
  b.input_dim_ = input_dim;
  return b;
}

Basis Basis::gaussian(Mat centers, double gamma) {
  if (centers.rows() < 1) throw std::domain_error("Basis::gaussian: need at least one center");
  if (!(gamma > 0.0)) throw std::domain_error("Basis::gaussian: gamma must be positive");
  if (!centers.allFinite()) throw std::domain_error("Basis::gaussian: centers must be finite");
  Basis b;
  b.kind_ = BasisKind::GaussianKernel;
  b.input_dim_ = static_cast<int>(centers.cols());
  b.centers_ = std::move(centers);
  b.gamma_ = gamma;
  return b;
}

Basis Basis::gaussian_from_subsample(const std::vector<Vec>& patterns,
                                     int center_count, double gamma,
                                     std::uint64_t seed) {
  if (patterns.empty())
    throw std::invalid_argument("gaussian_from_subsample: no patterns");
  if (center_count < 1 || center_count > static_cast<int>(patterns.size()))
    throw std::domain_error(
        "gaussian_from_subsample: center_count must be in [1, n]");
  // Seeded partial Fisher-Yates over the index set.
  std::vector<std::size_t> index(patterns.size());
  for (std::size_t i = 0; i < index.size(); ++i) index[i] = i;
  Rng rng(seed);
  Mat centers(center_count, patterns.front().size());
  for (int k = 0; k < center_count; ++k) {
    const auto remaining = index.size() - static_cast<std::size_t>(k);
    const auto pick = k + static_cast<std::size_t>(rng.uniform() * remaining);
    std::swap(index[static_cast<std::size_t>(k)], index[pick]);
    centers.row(k) = patterns[index[static_cast<std::size_t>(k)]].transpose();
  }
  return gaussian(std::move(centers), gamma);
}

int Basis::feature_dim() const {
  return kind_ == BasisKind::AffineInput ? input_dim_ + 1
                                         : static_cast<int>(centers_.rows());
}

Vec Basis::featurize(const Vec& x) const {
  if (x.size() != input_dim_)
    throw std::invalid_argument("featurize: pattern dimension mismatch");
  if (!x.allFinite()) throw std::domain_error("featurize: non-finite pattern");
  if (kind_ == BasisKind::AffineInput) {
    Vec phi(input_dim_ + 1);
    phi.head(input_dim_) = x;
    phi[input_dim_] = 1.0;
    return phi;
  }
  Vec phi(centers_.rows());
  for (Eigen::Index j = 0; j < centers_.rows(); ++j) {
    phi[j] = std::exp(-gamma_ * (x - centers_.row(j).transpose()).squaredNorm());
  }
  return phi;
}

Vec featurize(const Basis& basis, const Vec& x) { return basis.featurize(x); }

double LinearModel::margin(const Vec& x) const {
  if (alpha.size() != basis.feature_dim())
    throw std::invalid_argument("margin: alpha dimension does not match basis");
  return alpha.dot(basis.featurize(x)) - margin_offset;
}

int LinearModel::predict(const Vec& x) const { return margin(x) > 0.0 ? +1 : -1; }

double predict_margin(const LinearModel& model, const Vec& x) { return model.margin(x); }
int predict_label(const LinearModel& model, const Vec& x) { return model.predict(x); }

Regularizer::Regularizer(double lambda, RegKind kind) : lambda_(lambda), kind_(kind) {
  if (lambda < 0.0) throw std::domain_error("Regularizer: lambda must be non-negative");
  if (kind == RegKind::ExplicitMatrix)
    throw std::invalid_argument("Regularizer: ExplicitMatrix requires a matrix");
}

Regularizer::Regularizer(double lambda, Mat matrix)
    : lambda_(lambda), kind_(RegKind::ExplicitMatrix), matrix_(std::move(matrix)) {
  if (lambda < 0.0) throw std::domain_error("Regularizer: lambda must be non-negative");
  if (matrix_.rows() != matrix_.cols())
    throw std::invalid_argument("Regularizer: matrix must be square");
  if (!matrix_.isApprox(matrix_.transpose(), 1e-10))
    throw std::invalid_argument("Regularizer: matrix must be symmetric");
  // PSD check: LDLT succeeds and no pivot is below -tol.
  Eigen::LDLT<Mat> ldlt(matrix_);
  if (ldlt.info() != Eigen::Success || (ldlt.vectorD().array() < -1e-10).any())
    throw std::invalid_argument("Regularizer: matrix is not positive semi-definite");
}

double Regularizer::value(const Vec& alpha) const {
  if (lambda_ == 0.0) return 0.0;
  switch (kind_) {
    case RegKind::Identity:
      return 0.5 * lambda_ * alpha.squaredNorm();
    case RegKind::IdentityExceptBias: {
      const auto n = alpha.size();
      return 0.5 * lambda_ * alpha.head(n - 1).squaredNorm();
    }
    case RegKind::ExplicitMatrix:
      if (alpha.size() != matrix_.rows())
        throw std::invalid_argument("Regularizer: alpha dimension mismatch");
      return 0.5 * lambda_ * alpha.dot(matrix_ * alpha);
  }
  return 0.0;
}

Vec Regularizer::grad(const Vec& alpha) const {
  if (lambda_ == 0.0) return Vec::Zero(alpha.size());
  switch (kind_) {
    case RegKind::Identity:
      return lambda_ * alpha;
    case RegKind::IdentityExceptBias: {
      Vec g = lambda_ * alpha;
      g[alpha.size() - 1] = 0.0;
      return g;
    }
    case RegKind::ExplicitMatrix:
      if (alpha.size() != matrix_.rows())
        throw std::invalid_argument("Regularizer: alpha dimension mismatch");
      return lambda_ * (matrix_ * alpha);
  }
  return Vec::Zero(alpha.size());
}

std::pair<double, Vec> regularization_value_and_grad(const Regularizer& reg,
                                                     const Vec& alpha) {
  return {reg.value(alpha), reg.grad(alpha)};
}

namespace {

void write_double(std::ostream& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out << buf;
}

}  // namespace

void write_model(const LinearModel& model, std::ostream& out) {
  out << "pconf-model v1\n";
  if (model.basis.kind() == BasisKind::AffineInput) {
    out << "basis affine\n";
    out << "input_dim " << model.basis.input_dim() << "\n";
  } else {
    out << "basis gaussian\n";
    out << "input_dim " << model.basis.input_dim() << "\n";
    out << "gamma ";
    write_double(out, model.basis.gamma());
    out << "\n";
    const Mat& c = model.basis.centers();
    out << "centers " << c.rows() << "\n";
    for (Eigen::Index i = 0; i < c.rows(); ++i) {
      for (Eigen::Index j = 0; j < c.cols(); ++j) {
        if (j) out << ' ';
        write_double(out, c(i, j));
      }
      out << "\n";
    }
  }
  out << "margin_offset ";
  write_double(out, model.margin_offset);
  out << "\n";
  out << "alpha " << model.alpha.size() << "\n";
  for (Eigen::Index i = 0; i < model.alpha.size(); ++i) {
    if (i) out << ' ';
    write_double(out, model.alpha[i]);
  }
  out << "\n";
}

namespace {

std::string expect_key(std::istream& in, const std::string& key) {
  std::string k;
  if (!(in >> k) || k != key)
    throw InputFormatError("model file: expected field '" + key + "'");
  std::string rest;
  std::getline(in, rest);
  return rest.empty() ? rest : rest.substr(1);
}

}  // namespace

LinearModel read_model(std::istream& in) {
  std::string magic, version;
  if (!(in >> magic >> version) || magic != "pconf-model" || version != "v1")
    throw InputFormatError("model file: bad header (want 'pconf-model v1')");

  std::string kind = expect_key(in, "basis");
  LinearModel model;
  if (kind == "affine") {
    int d = std::stoi(expect_key(in, "input_dim"));
    model.basis = Basis::affine(d);
  } else if (kind == "gaussian") {
    int d = std::stoi(expect_key(in, "input_dim"));
    double gamma = std::stod(expect_key(in, "gamma"));
    std::istringstream cs(expect_key(in, "centers"));
    int b = 0;
    cs >> b;
    Mat centers(b, d);
    for (int i = 0; i < b; ++i)
      for (int j = 0; j < d; ++j)
        if (!(in >> centers(i, j)))
          throw InputFormatError("model file: truncated centers block");
    model.basis = Basis::gaussian(std::move(centers), gamma);
  } else {
    throw InputFormatError("model file: unknown basis '" + kind + "'");
  }
  model.margin_offset = std::stod(expect_key(in, "margin_offset"));
  int n = std::stoi(expect_key(in, "alpha"));
  if (n != model.basis.feature_dim())
    throw InputFormatError("model file: alpha size does not match basis");
  model.alpha.resize(n);
  for (int i = 0; i < n; ++i)
    if (!(in >> model.alpha[i]))
      throw InputFormatError("model file: truncated alpha block");
  if (!model.alpha.allFinite())
    throw InputFormatError("model file: non-finite weights");
  return model;
}

void save_model(const LinearModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open model file for writing: " + path);
  write_model(model, out);
  if (!out) throw IoError("failed writing model file: " + path);
}

LinearModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model file: " + path);
  return read_model(in);
}

}  // namespace pconf
