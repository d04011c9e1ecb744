#include "dbird/tridiagonal.hpp"

#include <cmath>
#include <string>

#include "dbird/error.hpp"

namespace dbird {

namespace {

void check_shape(const SymTridiagonal& q) {
  if (q.dim() == 0 || q.offdiag.size() + 1 != q.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "tridiagonal matrix has inconsistent band lengths");
  }
}

void check_length(std::size_t expected, std::size_t got) {
  if (expected != got) {
    throw Error(ErrorCode::DimensionMismatch, "expected vector of length " +
                                                  std::to_string(expected) + ", got " +
                                                  std::to_string(got));
  }
}

// Solves L w = rhs in place.
void forward_substitute(const BidiagonalFactor& f, std::span<double> w) {
  w[0] /= f.diag[0];
  for (std::size_t t = 1; t < w.size(); ++t) {
    w[t] = (w[t] - f.subdiag[t - 1] * w[t - 1]) / f.diag[t];
  }
}

// Solves L^T x = rhs in place.
void backward_substitute(const BidiagonalFactor& f, std::span<double> x) {
  const std::size_t n = x.size();
  x[n - 1] /= f.diag[n - 1];
  for (std::size_t t = n - 1; t-- > 0;) {
    x[t] = (x[t] - f.subdiag[t] * x[t + 1]) / f.diag[t];
  }
}

}  // namespace

BidiagonalFactor factorize(const SymTridiagonal& q) {
  check_shape(q);
  const std::size_t n = q.dim();
  BidiagonalFactor f;
  f.diag.resize(n);
  f.subdiag.resize(n - 1);
  double pivot = q.diag[0];
  for (std::size_t t = 0;; ++t) {
    if (!(pivot > kPivotTolerance)) {
      throw Error(ErrorCode::NotPositiveDefinite,
                  "pivot " + std::to_string(pivot) + " at row " + std::to_string(t));
    }
    f.diag[t] = std::sqrt(pivot);
    if (t + 1 == n) break;
    f.subdiag[t] = q.offdiag[t] / f.diag[t];
    pivot = q.diag[t + 1] - f.subdiag[t] * f.subdiag[t];
  }
  return f;
}

std::vector<double> solve(const BidiagonalFactor& factor, std::span<const double> rhs) {
  check_length(factor.dim(), rhs.size());
  std::vector<double> x(rhs.begin(), rhs.end());
  forward_substitute(factor, x);
  backward_substitute(factor, x);
  return x;
}

std::vector<double> multiply(const SymTridiagonal& q, std::span<const double> x) {
  check_shape(q);
  check_length(q.dim(), x.size());
  const std::size_t n = q.dim();
  std::vector<double> y(n);
  for (std::size_t t = 0; t < n; ++t) {
    double v = q.diag[t] * x[t];
    if (t > 0) v += q.offdiag[t - 1] * x[t - 1];
    if (t + 1 < n) v += q.offdiag[t] * x[t + 1];
    y[t] = v;
  }
  return y;
}

std::vector<double> sample_canonical(const SymTridiagonal& q, std::span<const double> b,
                                     std::span<const double> z) {
  const BidiagonalFactor f = factorize(q);
  check_length(f.dim(), b.size());
  check_length(f.dim(), z.size());
  std::vector<double> x(b.begin(), b.end());
  forward_substitute(f, x);
  for (std::size_t t = 0; t < x.size(); ++t) x[t] += z[t];
  backward_substitute(f, x);
  return x;
}

std::vector<double> sample_canonical(const SymTridiagonal& q, std::span<const double> b, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> z(q.dim());
  for (auto& v : z) v = normal(rng);
  return sample_canonical(q, b, z);
}

}  // namespace dbird
