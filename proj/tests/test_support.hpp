#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace dbird::testing {

inline double sample_mean(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

inline double sample_variance(std::span<const double> x) {
  const double m = sample_mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

inline double sample_median(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();
  return n % 2 ? x[n / 2] : 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

/// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

/// Critical KS value at alpha = 0.01 for samples of sizes n and m.
inline double ks_critical_001(std::size_t n, std::size_t m) {
  return 1.628 * std::sqrt(static_cast<double>(n + m) / (static_cast<double>(n) * m));
}

/// Monte Carlo standard error of the mean from non-overlapping batch means.
inline double batch_means_se(std::span<const double> x, std::size_t n_batches = 50) {
  const std::size_t len = x.size() / n_batches;
  std::vector<double> means(n_batches);
  for (std::size_t b = 0; b < n_batches; ++b) means[b] = sample_mean(x.subspan(b * len, len));
  return std::sqrt(sample_variance(means) / static_cast<double>(n_batches));
}

/// Mean and variance of PG(b, c) from the first `terms` terms of its
/// Gamma-series representation X = 1/(2 pi^2) sum g_k / ((k - 1/2)^2 + c^2/(4 pi^2)).
struct SeriesMoments {
  double mean = 0.0;
  double variance = 0.0;
};

inline SeriesMoments pg_series_moments(double b, double c, int terms = 10000) {
  using std::numbers::pi;
  SeriesMoments m;
  const double scale = 1.0 / (2.0 * pi * pi);
  for (int k = 1; k <= terms; ++k) {
    const double denom = (k - 0.5) * (k - 0.5) + c * c / (4.0 * pi * pi);
    m.mean += scale * b / denom;
    m.variance += scale * scale * b / (denom * denom);
  }
  return m;
}

}  // namespace dbird::testing

#include "dbird/dataset.hpp"

namespace dbird::testing {

/// Tiny single-student instance with fixed variances used by the
/// quadrature check: d = (-1, 0, 1); y = (1, 1, 0) at t = 0, (1, 0) at t = 1.
inline ResponseDataset quadrature_instance() {
  ResponseDataset d;
  d.n_students = 1;
  d.n_times = 2;
  d.items.difficulties = {-1.0, 0.0, 1.0};
  d.observations = {{0, 0, 0, 1}, {0, 0, 1, 1}, {0, 0, 2, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}};
  return d;
}

/// Posterior means of (theta_0, theta_1) for a single student with
/// theta_0 ~ N(0, v0), theta_1 | theta_0 ~ N(theta_0, vd) and Rasch
/// likelihood, by tensor-grid quadrature over [-6, 6]^2.
inline std::pair<double, double> quadrature_posterior_means(const ResponseDataset& d, double v0,
                                                            double vd, int points = 400) {
  const double lo = -6.0, hi = 6.0;
  const double h = (hi - lo) / (points - 1);
  auto loglik_at = [&](std::size_t t, double theta) {
    double ll = 0.0;
    for (const auto& o : d.observations) {
      if (o.time != t) continue;
      const double eta = theta - d.items[o.item];
      ll += o.correct * eta - std::log1p(std::exp(eta));
    }
    return ll;
  };
  std::vector<double> grid(points), ll0(points), ll1(points);
  for (int k = 0; k < points; ++k) {
    grid[k] = lo + k * h;
    ll0[k] = loglik_at(0, grid[k]);
    ll1[k] = loglik_at(1, grid[k]);
  }
  double z = 0.0, m0 = 0.0, m1 = 0.0;
  for (int a = 0; a < points; ++a) {
    for (int b = 0; b < points; ++b) {
      const double x0 = grid[a], x1 = grid[b];
      const double lp = -0.5 * x0 * x0 / v0 - 0.5 * (x1 - x0) * (x1 - x0) / vd + ll0[a] + ll1[b];
      const double w = std::exp(lp);
      z += w;
      m0 += w * x0;
      m1 += w * x1;
    }
  }
  return {m0 / z, m1 / z};
}

}  // namespace dbird::testing

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace dbird::testing {

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("dbird-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace dbird::testing
