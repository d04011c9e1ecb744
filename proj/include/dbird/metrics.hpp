#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dbird/gibbs.hpp"

namespace dbird {

struct CellInterval {
  double mean = 0.0;
  double sd = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

/// Posterior mean, SD and equal-tailed credible interval per (student, time).
struct IntervalSummary {
  std::size_t n_students = 0;
  std::size_t n_times = 0;
  double level = 0.95;
  std::vector<CellInterval> cells;  // N x T

  const CellInterval& at(std::size_t i, std::size_t t) const { return cells[i * n_times + t]; }
};

/// Linear interpolation between order statistics (R type 7).
/// `sorted` must be non-empty and ascending; 0 <= p <= 1.
double quantile_type7(std::span<const double> sorted, double p);

/// Summary of a sample: mean, SD (n - 1 denominator) and type-7 interval.
/// The sample is reordered in place.
CellInterval summarize_sample(std::span<double> sample, double level);

/// Summaries of theta = mu + beta (or beta alone for baselines).
/// Throws LevelOutOfRange unless 0 < level < 1.
IntervalSummary summarize_draws(const PosteriorDraws& draws, double level = 0.95);

/// Mean squared error over all cells. Throws DimensionMismatch.
double mse(std::span<const double> truth, std::span<const double> estimate);

/// Posterior-mean estimates extracted from a summary.
std::vector<double> posterior_means(const IntervalSummary& summary);

/// Fraction of cells whose closed interval contains the truth.
double empirical_coverage(std::span<const double> truth, const IntervalSummary& intervals);

/// Mean of upper - lower. Throws EmptyInput.
double mciw(const IntervalSummary& intervals);

}  // namespace dbird
