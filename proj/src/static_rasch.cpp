#include "dbird/static_rasch.hpp"

#include <cmath>

#include "dbird/error.hpp"

namespace dbird {

namespace {

constexpr double kStepTolerance = 1e-10;
constexpr int kMaxIterations = 100;

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// log(1 + e^x) without overflow.
double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

}  // namespace

double rasch_log_posterior(const AssessmentSlice& slice, double theta) {
  double value = -0.5 * theta * theta / (slice.prior_sd * slice.prior_sd);
  for (const auto& r : slice.responses) {
    const double eta = theta - r.difficulty;
    // y log s(eta) + (1 - y) log(1 - s(eta)) = y eta - log(1 + e^eta)
    value += r.correct * eta - softplus(eta);
  }
  return value;
}

double rasch_log_posterior_gradient(const AssessmentSlice& slice, double theta) {
  double g = -theta / (slice.prior_sd * slice.prior_sd);
  for (const auto& r : slice.responses) g += r.correct - logistic(theta - r.difficulty);
  return g;
}

MapEstimate map_ability(const AssessmentSlice& slice) {
  if (!(slice.prior_sd > 0.0)) throw Error(ErrorCode::InvalidConfig, "prior_sd must be positive");
  const double prior_precision = 1.0 / (slice.prior_sd * slice.prior_sd);
  MapEstimate est;
  double objective = rasch_log_posterior(slice, est.theta);
  for (est.iterations = 1; est.iterations <= kMaxIterations; ++est.iterations) {
    double curvature = prior_precision;
    for (const auto& r : slice.responses) {
      const double p = logistic(est.theta - r.difficulty);
      curvature += p * (1.0 - p);
    }
    double step = rasch_log_posterior_gradient(slice, est.theta) / curvature;
    double candidate = rasch_log_posterior(slice, est.theta + step);
    for (int halvings = 0; candidate < objective && halvings < 60; ++halvings) {
      step *= 0.5;
      candidate = rasch_log_posterior(slice, est.theta + step);
    }
    est.theta += step;
    objective = candidate;
    if (std::abs(step) < kStepTolerance) return est;
  }
  throw Error(ErrorCode::NoConvergence, "Newton iteration did not converge in 100 steps");
}

}  // namespace dbird
