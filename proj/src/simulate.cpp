#include "dbird/simulate.hpp"

#include <cmath>
#include <random>
#include <string>

#include "dbird/error.hpp"
#include "dbird/random.hpp"

namespace dbird {

namespace {

double draw_gamma(const GammaParams& g, Rng& rng) {
  return std::gamma_distribution<double>(g.shape, 1.0 / g.rate)(rng);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidConfig, what);
}

void require_gamma(const GammaParams& g, const char* name) {
  require(g.shape > 0.0 && g.rate > 0.0 && std::isfinite(g.shape) && std::isfinite(g.rate),
          std::string(name) + " needs positive shape and rate");
}

}  // namespace

SimConfig SimConfig::paper() { return SimConfig{}; }

SimConfig SimConfig::desk_scale() {
  SimConfig c;
  c.n_students = 40;
  c.n_times = 40;
  c.items_per_session = 5;
  c.group_split = 20;
  return c;
}

void SimConfig::validate() const {
  require(n_students >= 1 && n_times >= 1, "simulation needs at least one student and time point");
  require(group_split <= n_students, "group_split must not exceed n_students");
  for (double v : {mu_init_var, mu_innov_var, item_noise_var}) {
    require(v >= 0.0 && std::isfinite(v), "simulation variances must be finite and non-negative");
  }
  require_gamma(beta_init_var_gamma, "beta_init_var_gamma");
  require_gamma(innov_gamma_group_a, "innov_gamma_group_a");
  require_gamma(innov_gamma_group_b, "innov_gamma_group_b");
}

SimulatedCohort simulate_cohort(const SimConfig& config) {
  config.validate();
  const std::size_t N = config.n_students;
  const std::size_t T = config.n_times;
  Rng rng(mix64(config.seed ^ static_cast<std::uint64_t>(StreamPhase::Simulation)));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  SimulatedCohort out;
  TrueLatents& truth = out.truth;
  truth.n_students = N;
  truth.n_times = T;
  truth.sigma2_mu_init = config.mu_init_var;
  truth.sigma2_mu_innovation = config.mu_innov_var;

  truth.mu.resize(T);
  truth.mu[0] = std::sqrt(config.mu_init_var) * normal(rng);
  const double mu_step_sd = std::sqrt(config.mu_innov_var);
  for (std::size_t t = 1; t < T; ++t) truth.mu[t] = truth.mu[t - 1] + mu_step_sd * normal(rng);

  truth.sigma2_beta_init.resize(N);
  truth.sigma2_beta_innovation.resize(N);
  truth.beta.resize(N * T);
  for (std::size_t i = 0; i < N; ++i) {
    truth.sigma2_beta_init[i] = draw_gamma(config.beta_init_var_gamma, rng);
    truth.sigma2_beta_innovation[i] = draw_gamma(
        i < config.group_split ? config.innov_gamma_group_a : config.innov_gamma_group_b, rng);
    const double step_sd = std::sqrt(truth.sigma2_beta_innovation[i]);
    double* row = truth.beta.data() + i * T;
    row[0] = std::sqrt(truth.sigma2_beta_init[i]) * normal(rng);
    for (std::size_t t = 1; t < T; ++t) row[t] = row[t - 1] + step_sd * normal(rng);
  }
  for (std::size_t t = 0; t < T; ++t) {
    double mean = 0.0;
    for (std::size_t i = 0; i < N; ++i) mean += truth.beta[i * T + t];
    mean /= static_cast<double>(N);
    for (std::size_t i = 0; i < N; ++i) truth.beta[i * T + t] -= mean;
  }
  truth.theta.resize(N * T);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t t = 0; t < T; ++t) {
      truth.theta[i * T + t] = truth.mu[t] + truth.beta[i * T + t];
    }
  }

  ResponseDataset& data = out.data;
  data.n_students = N;
  data.n_times = T;
  const std::size_t per_session = config.items_per_session;
  data.observations.reserve(N * T * per_session);
  data.items.difficulties.reserve(N * T * per_session);
  const double item_sd = std::sqrt(config.item_noise_var);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t t = 0; t < T; ++t) {
      const double theta = truth.theta[i * T + t];
      for (std::size_t k = 0; k < per_session; ++k) {
        const double d = theta + item_sd * normal(rng);
        const double p = 1.0 / (1.0 + std::exp(-(theta - d)));
        const std::size_t item = data.items.difficulties.size();
        data.items.difficulties.push_back(d);
        data.observations.push_back({i, t, item, unif(rng) < p ? 1 : 0});
      }
    }
  }
  out.data = validate_dataset(std::move(out.data));
  return out;
}

double expected_accuracy(const TrueLatents& truth, const ResponseDataset& data) {
  if (data.observations.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "expected accuracy of an empty dataset is undefined");
  }
  if (truth.n_students != data.n_students || truth.n_times != data.n_times) {
    throw Error(ErrorCode::DimensionMismatch, "truth and dataset dimensions differ");
  }
  double sum = 0.0;
  for (const auto& o : data.observations) {
    sum += 1.0 / (1.0 + std::exp(-(truth.theta_at(o.student, o.time) - data.items[o.item])));
  }
  return sum / static_cast<double>(data.observations.size());
}

}  // namespace dbird
