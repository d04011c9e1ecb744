#include <Eigen/Dense>
#include <random>

#include "doctest.h"
#include "dbird/error.hpp"
#include "dbird/tridiagonal.hpp"
#include "test_support.hpp"

using namespace dbird;

namespace {

Eigen::MatrixXd dense(const SymTridiagonal& q) {
  const auto n = static_cast<Eigen::Index>(q.dim());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index t = 0; t < n; ++t) {
    m(t, t) = q.diag[t];
    if (t + 1 < n) m(t, t + 1) = m(t + 1, t) = q.offdiag[t];
  }
  return m;
}

// Diagonally dominant, hence SPD.
SymTridiagonal random_spd(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SymTridiagonal q(n);
  for (auto& o : q.offdiag) o = u(rng);
  for (std::size_t t = 0; t < n; ++t) {
    double row = 0.0;
    if (t > 0) row += std::abs(q.offdiag[t - 1]);
    if (t + 1 < n) row += std::abs(q.offdiag[t]);
    q.diag[t] = row + 0.1 + std::abs(u(rng));
  }
  return q;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("factorize examples") {
  const auto f1 = factorize(SymTridiagonal({4.0}, {}));
  CHECK(f1.diag[0] == 2.0);

  // Dense Cholesky oracle for [[2, -1], [-1, 2]].
  const SymTridiagonal q({2.0, 2.0}, {-1.0});
  const Eigen::MatrixXd l = dense(q).llt().matrixL();
  const auto f = factorize(q);
  CHECK(f.diag[0] == doctest::Approx(l(0, 0)).epsilon(1e-14));
  CHECK(f.diag[1] == doctest::Approx(l(1, 1)).epsilon(1e-14));
  CHECK(f.subdiag[0] == doctest::Approx(l(1, 0)).epsilon(1e-14));
  CHECK(f.diag[0] == doctest::Approx(1.414214).epsilon(1e-6));
  CHECK(f.diag[1] == doctest::Approx(1.224745).epsilon(1e-6));
  CHECK(f.subdiag[0] == doctest::Approx(-0.707107).epsilon(1e-6));

  CHECK(code_of([] { factorize(SymTridiagonal({1.0, 1.0}, {-1.0})); }) ==
        ErrorCode::NotPositiveDefinite);
  CHECK(code_of([] { factorize(SymTridiagonal({-1.0}, {})); }) == ErrorCode::NotPositiveDefinite);
}

TEST_CASE("factor reproduces the matrix") {
  std::mt19937_64 rng(1);
  for (int rep = 0; rep < 20; ++rep) {
    const auto q = random_spd(1 + rng() % 60, rng);
    const auto f = factorize(q);
    double norm = 0.0, err = 0.0;
    for (std::size_t t = 0; t < q.dim(); ++t) {
      norm = std::max(norm, std::abs(q.diag[t]));
      double d = f.diag[t] * f.diag[t];
      if (t > 0) d += f.subdiag[t - 1] * f.subdiag[t - 1];
      err = std::max(err, std::abs(d - q.diag[t]));
      if (t + 1 < q.dim()) err = std::max(err, std::abs(f.subdiag[t] * f.diag[t] - q.offdiag[t]));
    }
    CHECK(err <= 1e-12 * norm);
  }
}

TEST_CASE("solve examples") {
  CHECK(solve(factorize(SymTridiagonal({1.0, 1.0}, {0.0})), std::vector{3.0, 4.0}) ==
        std::vector{3.0, 4.0});
  const auto x = solve(factorize(SymTridiagonal({2.0, 2.0}, {-1.0})), std::vector{1.0, 1.0});
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(code_of([] { solve(factorize(SymTridiagonal({1.0}, {})), std::vector{1.0, 2.0}); }) ==
        ErrorCode::DimensionMismatch);
}

TEST_CASE("solve matches a dense solver and is a left inverse") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal;
  for (std::size_t n : {1u, 2u, 50u, 200u}) {
    const auto q = random_spd(n, rng);
    std::vector<double> b(n);
    for (auto& v : b) v = normal(rng);
    const auto x = solve(factorize(q), b);
    const Eigen::VectorXd oracle =
        dense(q).lu().solve(Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(n)));
    double dev = 0.0, bnorm = 0.0, resid = 0.0;
    const auto qx = multiply(q, x);
    for (std::size_t t = 0; t < n; ++t) {
      dev = std::max(dev, std::abs(x[t] - oracle(static_cast<Eigen::Index>(t))));
      bnorm = std::max(bnorm, std::abs(b[t]));
      resid = std::max(resid, std::abs(qx[t] - b[t]));
    }
    CHECK(dev < 1e-10);
    CHECK(resid <= 1e-10 * bnorm);
  }
}

TEST_CASE("canonical sampling with zero noise returns the mean exactly") {
  std::mt19937_64 rng(3);
  const auto q = random_spd(30, rng);
  std::vector<double> b(30, 0.7);
  b[4] = -2.0;
  const std::vector<double> zeros(30, 0.0);
  CHECK(sample_canonical(q, b, zeros) == solve(factorize(q), b));
}

TEST_CASE("canonical sampling: scalar moments") {
  Rng rng(4);
  const SymTridiagonal q({4.0}, {});
  std::vector<double> x(100000);
  for (auto& v : x) v = sample_canonical(q, std::vector{8.0}, rng)[0];
  CHECK(std::abs(testing::sample_mean(x) - 2.0) < 0.01);
  CHECK(std::abs(testing::sample_variance(x) - 0.25) < 0.01);
}

TEST_CASE("canonical sampling: 3x3 covariance") {
  Rng rng(5);
  const SymTridiagonal q({3.0, 3.0, 3.0}, {-1.0, -1.0});
  const std::vector<double> b{1.0, 0.0, -1.0};
  const Eigen::MatrixXd cov = dense(q).inverse();
  const Eigen::VectorXd mean = cov * Eigen::Vector3d(1.0, 0.0, -1.0);
  const int n = 100000;
  Eigen::MatrixXd s(n, 3);
  for (int k = 0; k < n; ++k) {
    const auto x = sample_canonical(q, b, rng);
    for (int c = 0; c < 3; ++c) s(k, c) = x[c];
  }
  const Eigen::RowVectorXd m = s.colwise().mean();
  const Eigen::MatrixXd centered = s.rowwise() - m;
  const Eigen::MatrixXd emp = centered.transpose() * centered / (n - 1);
  for (int r = 0; r < 3; ++r) {
    CHECK(std::abs(m(r) - mean(r)) < 0.05 * std::abs(mean(r)) + 0.01);
    for (int c = 0; c < 3; ++c) {
      CAPTURE(r);
      CAPTURE(c);
      CHECK(std::abs(emp(r, c) - cov(r, c)) <= 0.05 * std::abs(cov(r, c)));
    }
  }
}

TEST_CASE("canonical sampling errors") {
  Rng rng(6);
  CHECK(code_of([&] { sample_canonical(SymTridiagonal({1.0, 1.0}, {-1.0}), std::vector{0.0, 0.0}, rng); }) ==
        ErrorCode::NotPositiveDefinite);
  CHECK(code_of([&] { sample_canonical(SymTridiagonal({1.0, 1.0}, {0.0}), std::vector{0.0}, rng); }) ==
        ErrorCode::DimensionMismatch);
}
