#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace phyloci {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using IntVector = Eigen::VectorXi;

/// Counter-based 64-bit generator (SplitMix64).  The state advances by a
/// fixed odd constant and each output is a finalized hash of the counter,
/// so seed -> stream is reproducible across platforms and languages.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0,1), 53-bit mantissa.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo,hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

/// Numeric rank: number of singular values exceeding rel_tol * sigma_max.
int numeric_rank(const Matrix& m, double rel_tol);

/// Numeric rank with row equilibration: each nonzero row is scaled to unit
/// norm first.  Rank is invariant under row scaling; equilibration keeps the
/// singular-value ratios meaningful when rows live on very different scales.
int numeric_rank_equilibrated(const Matrix& m, double rel_tol);

inline int ipow(int base, int exp) {
  int r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace phyloci
