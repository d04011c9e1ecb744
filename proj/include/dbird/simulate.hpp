#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dbird/dataset.hpp"

namespace dbird {

/// Gamma distribution in shape-rate form (mean shape / rate).
struct GammaParams {
  double shape = 1.0;
  double rate = 1.0;
};

/// Data-generating process for the recovery study. All N(., v) arguments
/// are variances.
struct SimConfig {
  std::size_t n_students = 150;
  std::size_t n_times = 100;
  std::size_t items_per_session = 10;
  double mu_init_var = 0.1;
  double mu_innov_var = 0.05;
  /// Students with index below this use innov_gamma_group_a.
  std::size_t group_split = 75;
  GammaParams beta_init_var_gamma{5.0, 10.0};
  GammaParams innov_gamma_group_a{5.0, 500.0};
  GammaParams innov_gamma_group_b{5.0, 10.0};
  /// Item difficulty d ~ N(theta, item_noise_var).
  double item_noise_var = 0.5;
  std::uint64_t seed = 0;

  /// N = 150, T = 100, 10 items per session.
  static SimConfig paper();
  /// N = 40, T = 40, 5 items per session.
  static SimConfig desk_scale();

  void validate() const;
};

/// Ground truth of one simulated cohort.
struct TrueLatents {
  std::size_t n_students = 0;
  std::size_t n_times = 0;
  std::vector<double> mu;     // T
  std::vector<double> beta;   // N x T, centred across students at every t
  std::vector<double> theta;  // N x T, mu + beta
  double sigma2_mu_init = 0.0;
  double sigma2_mu_innovation = 0.0;
  std::vector<double> sigma2_beta_init;        // N
  std::vector<double> sigma2_beta_innovation;  // N

  double theta_at(std::size_t i, std::size_t t) const { return theta[i * n_times + t]; }
};

struct SimulatedCohort {
  TrueLatents truth;
  ResponseDataset data;
};

/// Simulates latent trajectories, adaptive item difficulties (one fresh item
/// per response) and Bernoulli responses.
SimulatedCohort simulate_cohort(const SimConfig& config);

/// Mean over observations of logistic(theta[i,t] - d[j]).
double expected_accuracy(const TrueLatents& truth, const ResponseDataset& data);

}  // namespace dbird
