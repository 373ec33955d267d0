#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace pconf {

// Deterministic, platform-independent random source.
//
// Bit stream: std::mt19937_64, whose output sequence is fully specified by
// the C++ standard, so identical seeds give identical draws on every
// platform. Uniform doubles take the top 53 bits of one 64-bit word.
// Gaussian draws use the Marsaglia polar transform (std::normal_distribution
// is implementation-defined and must not be used where reproducibility
// matters). The polar method consumes a data-dependent but deterministic
// number of words and yields pairs; the spare is cached.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Marsaglia polar.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  Eigen::VectorXd normal_vec(int dim) {
    Eigen::VectorXd x(dim);
    for (int i = 0; i < dim; ++i) x[i] = normal();
    return x;
  }

  std::uint64_t next_word() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// SplitMix64 finalizer; good avalanche, used to derive independent
// sub-stream seeds from a base seed plus a stream index. Distinct
// (base, stream) pairs map to distinct seeds for all practical purposes.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace pconf
