#pragma once

#include <vector>

namespace dbird {

struct ScoredItem {
  double difficulty = 0.0;
  int correct = 0;
};

/// Responses from one assessment sitting, with a N(0, prior_sd^2) ability prior.
struct AssessmentSlice {
  std::vector<ScoredItem> responses;
  double prior_sd = 5.0;
};

struct MapEstimate {
  double theta = 0.0;
  int iterations = 0;
};

/// Rasch log-likelihood plus Gaussian log-prior (up to a constant).
double rasch_log_posterior(const AssessmentSlice& slice, double theta);

/// Derivative of rasch_log_posterior in theta.
double rasch_log_posterior_gradient(const AssessmentSlice& slice, double theta);

/// Posterior mode by damped Newton iteration from 0.
MapEstimate map_ability(const AssessmentSlice& slice);

}  // namespace dbird
