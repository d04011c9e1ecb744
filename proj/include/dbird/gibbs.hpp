#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dbird/dataset.hpp"
#include "dbird/random.hpp"
#include "dbird/tridiagonal.hpp"

namespace dbird {

/// Starting values for the variance components (and their fixed values when
/// variance updates are disabled).
struct VarianceInit {
  double mu_init = 1.0;
  double mu_innovation = 0.1;
  double beta_init = 1.0;
  double beta_innovation = 0.1;
};

struct McmcConfig {
  std::size_t n_burn = 10000;
  std::size_t n_keep = 10000;
  std::size_t thin = 1;
  std::uint64_t seed = 0;
  /// Worker threads for per-student work; results do not depend on it.
  std::size_t workers = 1;
  /// When false every variance stays at its VarianceInit value.
  bool update_variances = true;
  VarianceInit init;
  /// Innovation sums of squares below 1e-12 raise DegenerateSumOfSquares
  /// unless a floor is set, in which case they are replaced by it.
  std::optional<double> ss_floor;

  void validate() const;
};

/// Current values of every latent quantity in one chain.
struct ChainState {
  std::size_t n_students = 0;
  std::size_t n_times = 0;
  std::vector<double> mu;    // length T, empty without a cohort trend
  std::vector<double> beta;  // N x T, row-major by student
  std::vector<double> omega; // one per observation

  double sigma2_mu_init = 1.0;
  double aux_mu_init = 1.0;
  double sigma2_mu_innovation = 0.1;
  // Length N for per-student variants, 1 when shared.
  std::vector<double> sigma2_beta_init;
  std::vector<double> aux_beta_init;
  std::vector<double> sigma2_beta_innovation;

  /// Prior-mean state (all trajectories zero) with the given variances.
  static ChainState initial(const ResponseDataset& data, const ModelSpec& spec,
                            const VarianceInit& init);

  bool has_cohort() const noexcept { return !mu.empty(); }
  double beta_at(std::size_t i, std::size_t t) const { return beta[i * n_times + t]; }
  std::span<double> beta_row(std::size_t i) { return {beta.data() + i * n_times, n_times}; }
  std::span<const double> beta_row(std::size_t i) const {
    return {beta.data() + i * n_times, n_times};
  }
  double theta(std::size_t i, std::size_t t) const {
    return (mu.empty() ? 0.0 : mu[t]) + beta[i * n_times + t];
  }
  /// Index into the per-student or shared variance vectors.
  std::size_t variance_slot(std::size_t i) const {
    return sigma2_beta_innovation.size() == 1 ? 0 : i;
  }
};

/// Gaussian full conditional in canonical form: precision q and linear term b.
struct CanonicalGaussian {
  SymTridiagonal q;
  std::vector<double> b;
};

/// Adds the random-walk prior precision (initial variance, innovation
/// variance) to q.
void add_random_walk_prior(SymTridiagonal& q, double init_variance, double innovation_variance);

/// omega <- PG(1, theta[i,t] - d[j]) for every observation, from one stream.
void draw_omegas(ChainState& state, const ResponseDataset& data, Rng& rng);

/// Full conditional of the cohort trend given omega and beta.
/// Throws VariantMismatch when the state has no cohort trend.
CanonicalGaussian build_mu_conditional(const ChainState& state, const ResponseDataset& data);

/// Full conditional of student i's deviation trajectory given omega and mu.
/// Throws StudentOutOfRange.
CanonicalGaussian build_beta_conditional(std::size_t student, const ChainState& state,
                                         const ResponseDataset& data);

/// Jeffreys-prior update: InverseGamma(n/2, SS/2) for n Gaussian increments.
/// Throws DegenerateSumOfSquares when SS < 1e-12 and no floor is given.
double update_innovation_variance(std::span<const double> increments, Rng& rng,
                                  std::optional<double> ss_floor = std::nullopt);

/// One Gibbs sub-step for a variance with a half-Cauchy(0, 1) prior on its
/// square root, via the mixture sigma2 | a ~ IG(1/2, 1/a), a ~ IG(1/2, 1).
/// `values` are the zero-mean Gaussian states that share this variance.
/// Returns (sigma2, a).
std::pair<double, double> update_initial_variance_halfcauchy(std::span<const double> values,
                                                             double aux, Rng& rng);

inline std::pair<double, double> update_initial_variance_halfcauchy(double value, double aux,
                                                                    Rng& rng) {
  return update_initial_variance_halfcauchy(std::span<const double>(&value, 1), aux, rng);
}

/// Moves the cross-student mean of beta at each time into mu. theta is unchanged.
/// Throws VariantMismatch when the state has no cohort trend.
void recenter(ChainState& state);

/// Retained post-burn-in draws of one chain.
struct PosteriorDraws {
  ModelSpec spec;
  McmcConfig config;
  std::size_t n_students = 0;
  std::size_t n_times = 0;
  std::size_t n_draws = 0;

  std::vector<double> mu;    // n_draws x T (cohort variants only)
  std::vector<double> beta;  // n_draws x N x T

  // Variance traces, one entry (or one row) per draw.
  std::vector<double> sigma2_mu_init;
  std::vector<double> sigma2_mu_innovation;
  std::size_t beta_variance_width = 0;  // N, or 1 when shared
  std::vector<double> sigma2_beta_init;        // n_draws x width
  std::vector<double> sigma2_beta_innovation;  // n_draws x width

  /// Number of innovation updates whose sum of squares was floored.
  std::size_t n_floored_updates = 0;

  bool has_cohort() const noexcept { return !mu.empty(); }
  double theta(std::size_t draw, std::size_t i, std::size_t t) const {
    double v = beta[(draw * n_students + i) * n_times + t];
    if (!mu.empty()) v += mu[draw * n_times + t];
    return v;
  }
};

/// Latent values beyond this magnitude abort the chain with ChainDiverged.
inline constexpr double kDivergenceBound = 1e6;

/// Blocked Gibbs sampler: omega, then mu, then each beta_i, then recentering,
/// then innovation and initial variances.
class GibbsSampler {
 public:
  GibbsSampler(const ResponseDataset& data, ModelSpec spec, McmcConfig config);

  /// Runs one full sweep.
  void sweep();

  const ChainState& state() const noexcept { return state_; }
  ChainState& mutable_state() noexcept { return state_; }
  std::uint64_t sweeps_done() const noexcept { return sweep_; }
  std::size_t floored_updates() const noexcept { return floored_; }

 private:
  template <class Fn>
  void for_each_student(Fn&& fn);
  double innovation_draw(std::span<const double> increments, Rng& rng);
  void update_variances();
  void check_divergence() const;

  const ResponseDataset& data_;
  ModelSpec spec_;
  McmcConfig config_;
  CellIndex cells_;
  ChainState state_;
  std::uint64_t sweep_ = 0;
  std::size_t floored_ = 0;
};

/// Runs n_burn + n_keep * thin sweeps and keeps every thin-th post-burn state.
PosteriorDraws run_chain(const ResponseDataset& data, const ModelSpec& spec,
                         const McmcConfig& config);

}  // namespace dbird
