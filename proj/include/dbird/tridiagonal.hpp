#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dbird/random.hpp"

namespace dbird {

/// Symmetric tridiagonal matrix, e.g. the precision of a random-walk trajectory.
struct SymTridiagonal {
  std::vector<double> diag;     // length T
  std::vector<double> offdiag;  // length T - 1

  SymTridiagonal() = default;
  explicit SymTridiagonal(std::size_t dim) : diag(dim, 0.0), offdiag(dim > 0 ? dim - 1 : 0, 0.0) {}
  SymTridiagonal(std::vector<double> d, std::vector<double> off)
      : diag(std::move(d)), offdiag(std::move(off)) {}

  std::size_t dim() const noexcept { return diag.size(); }
};

/// Lower-bidiagonal Cholesky factor L with L L^T = Q.
struct BidiagonalFactor {
  std::vector<double> diag;     // strictly positive
  std::vector<double> subdiag;  // L(t+1, t)

  std::size_t dim() const noexcept { return diag.size(); }
};

/// Pivots at or below this value are rejected as not positive definite.
inline constexpr double kPivotTolerance = 1e-12;

/// O(T) Cholesky factorisation. Throws NotPositiveDefinite.
BidiagonalFactor factorize(const SymTridiagonal& q);

/// Solves Q x = rhs by forward then backward substitution. Throws DimensionMismatch.
std::vector<double> solve(const BidiagonalFactor& factor, std::span<const double> rhs);

/// Multiplies Q by x.
std::vector<double> multiply(const SymTridiagonal& q, std::span<const double> x);

/// Draw from N(Q^{-1} b, Q^{-1}) given the standard-normal vector z:
/// x = L^{-T} (L^{-1} b + z). With z = 0 this is exactly solve(factorize(q), b).
std::vector<double> sample_canonical(const SymTridiagonal& q, std::span<const double> b,
                                     std::span<const double> z);

/// Same, with z drawn from rng.
std::vector<double> sample_canonical(const SymTridiagonal& q, std::span<const double> b, Rng& rng);

}  // namespace dbird
