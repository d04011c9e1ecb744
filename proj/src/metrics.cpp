#include "dbird/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dbird/error.hpp"

namespace dbird {

namespace {

void require_same_size(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(ErrorCode::DimensionMismatch,
                "sizes differ: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace

double quantile_type7(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw Error(ErrorCode::EmptyInput, "quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

CellInterval summarize_sample(std::span<double> sample, double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(ErrorCode::LevelOutOfRange, "credible level must lie in (0, 1)");
  }
  if (sample.empty()) throw Error(ErrorCode::EmptyInput, "summary of an empty sample");
  CellInterval c;
  const double n = static_cast<double>(sample.size());
  for (double v : sample) c.mean += v;
  c.mean /= n;
  double ss = 0.0;
  for (double v : sample) ss += (v - c.mean) * (v - c.mean);
  c.sd = sample.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  std::sort(sample.begin(), sample.end());
  c.lower = quantile_type7(sample, 0.5 * (1.0 - level));
  c.upper = quantile_type7(sample, 0.5 * (1.0 + level));
  return c;
}

IntervalSummary summarize_draws(const PosteriorDraws& draws, double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(ErrorCode::LevelOutOfRange, "credible level must lie in (0, 1)");
  }
  IntervalSummary s;
  s.n_students = draws.n_students;
  s.n_times = draws.n_times;
  s.level = level;
  s.cells.resize(draws.n_students * draws.n_times);
  std::vector<double> sample(draws.n_draws);
  for (std::size_t i = 0; i < draws.n_students; ++i) {
    for (std::size_t t = 0; t < draws.n_times; ++t) {
      for (std::size_t k = 0; k < draws.n_draws; ++k) sample[k] = draws.theta(k, i, t);
      s.cells[i * draws.n_times + t] = summarize_sample(sample, level);
    }
  }
  return s;
}

double mse(std::span<const double> truth, std::span<const double> estimate) {
  require_same_size(truth.size(), estimate.size());
  if (truth.empty()) throw Error(ErrorCode::EmptyInput, "MSE of empty inputs");
  double sum = 0.0;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    const double e = estimate[k] - truth[k];
    sum += e * e;
  }
  return sum / static_cast<double>(truth.size());
}

std::vector<double> posterior_means(const IntervalSummary& summary) {
  std::vector<double> m(summary.cells.size());
  std::transform(summary.cells.begin(), summary.cells.end(), m.begin(),
                 [](const CellInterval& c) { return c.mean; });
  return m;
}

double empirical_coverage(std::span<const double> truth, const IntervalSummary& intervals) {
  require_same_size(truth.size(), intervals.cells.size());
  if (truth.empty()) throw Error(ErrorCode::EmptyInput, "coverage of empty inputs");
  std::size_t hits = 0;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    const auto& c = intervals.cells[k];
    if (c.lower <= truth[k] && truth[k] <= c.upper) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

double mciw(const IntervalSummary& intervals) {
  if (intervals.cells.empty()) throw Error(ErrorCode::EmptyInput, "no intervals");
  double sum = 0.0;
  for (const auto& c : intervals.cells) sum += c.upper - c.lower;
  return sum / static_cast<double>(intervals.cells.size());
}

}  // namespace dbird
