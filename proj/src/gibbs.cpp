#include "dbird/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include <oneapi/tbb/blocked_range.h>
#include <oneapi/tbb/parallel_for.h>
#include <oneapi/tbb/task_arena.h>

#include "dbird/error.hpp"
#include "dbird/polya_gamma.hpp"

namespace dbird {

namespace {

constexpr double kMinSumOfSquares = 1e-12;

std::pair<std::size_t, std::size_t> student_range(const ResponseDataset& data, std::size_t i) {
  const auto& obs = data.observations;
  auto lo = std::partition_point(obs.begin(), obs.end(),
                                 [i](const Observation& o) { return o.student < i; });
  auto hi = std::partition_point(lo, obs.end(),
                                 [i](const Observation& o) { return o.student <= i; });
  return {static_cast<std::size_t>(lo - obs.begin()), static_cast<std::size_t>(hi - obs.begin())};
}

void draw_omega_range(ChainState& state, const ResponseDataset& data, std::size_t begin,
                      std::size_t end, Rng& rng) {
  for (std::size_t k = begin; k < end; ++k) {
    const Observation& o = data.observations[k];
    state.omega[k] = draw_pg1(state.theta(o.student, o.time) - data.items[o.item], rng);
  }
}

void check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::InvalidConfig, std::string(what) + " must be positive and finite");
  }
}

}  // namespace

void McmcConfig::validate() const {
  if (n_keep < 1) throw Error(ErrorCode::InvalidConfig, "n_keep must be at least 1");
  if (thin < 1) throw Error(ErrorCode::InvalidConfig, "thin must be at least 1");
  if (workers < 1) throw Error(ErrorCode::InvalidConfig, "workers must be at least 1");
  check_positive(init.mu_init, "initial cohort variance");
  check_positive(init.mu_innovation, "cohort innovation variance");
  check_positive(init.beta_init, "initial deviation variance");
  check_positive(init.beta_innovation, "deviation innovation variance");
  if (ss_floor) check_positive(*ss_floor, "sum-of-squares floor");
}

ChainState ChainState::initial(const ResponseDataset& data, const ModelSpec& spec,
                               const VarianceInit& init) {
  ChainState s;
  s.n_students = data.n_students;
  s.n_times = data.n_times;
  if (spec.include_cohort()) s.mu.assign(data.n_times, 0.0);
  s.beta.assign(data.n_students * data.n_times, 0.0);
  s.omega.assign(data.observations.size(), 0.25);
  s.sigma2_mu_init = init.mu_init;
  s.sigma2_mu_innovation = init.mu_innovation;
  const std::size_t width =
      spec.innovation_sharing() == InnovationSharing::Shared ? 1 : data.n_students;
  s.sigma2_beta_init.assign(width, init.beta_init);
  s.aux_beta_init.assign(width, 1.0);
  s.sigma2_beta_innovation.assign(width, init.beta_innovation);
  return s;
}

void add_random_walk_prior(SymTridiagonal& q, double init_variance, double innovation_variance) {
  const std::size_t n = q.dim();
  const double p = 1.0 / innovation_variance;
  q.diag[0] += 1.0 / init_variance;
  for (std::size_t t = 0; t + 1 < n; ++t) {
    q.diag[t] += p;
    q.diag[t + 1] += p;
    q.offdiag[t] -= p;
  }
}

void draw_omegas(ChainState& state, const ResponseDataset& data, Rng& rng) {
  draw_omega_range(state, data, 0, data.observations.size(), rng);
}

CanonicalGaussian build_mu_conditional(const ChainState& state, const ResponseDataset& data) {
  if (!state.has_cohort()) {
    throw Error(ErrorCode::VariantMismatch, "cohort conditional requested for a non-cohort model");
  }
  CanonicalGaussian c{SymTridiagonal(state.n_times), std::vector<double>(state.n_times, 0.0)};
  for (std::size_t k = 0; k < data.observations.size(); ++k) {
    const Observation& o = data.observations[k];
    const double w = state.omega[k];
    c.q.diag[o.time] += w;
    c.b[o.time] += (o.correct - 0.5) + w * (data.items[o.item] - state.beta_at(o.student, o.time));
  }
  add_random_walk_prior(c.q, state.sigma2_mu_init, state.sigma2_mu_innovation);
  return c;
}

CanonicalGaussian build_beta_conditional(std::size_t student, const ChainState& state,
                                         const ResponseDataset& data) {
  if (student >= state.n_students) {
    throw Error(ErrorCode::StudentOutOfRange, "student " + std::to_string(student));
  }
  CanonicalGaussian c{SymTridiagonal(state.n_times), std::vector<double>(state.n_times, 0.0)};
  const auto [begin, end] = student_range(data, student);
  for (std::size_t k = begin; k < end; ++k) {
    const Observation& o = data.observations[k];
    const double w = state.omega[k];
    const double cohort = state.has_cohort() ? state.mu[o.time] : 0.0;
    c.q.diag[o.time] += w;
    c.b[o.time] += (o.correct - 0.5) + w * (data.items[o.item] - cohort);
  }
  const std::size_t slot = state.variance_slot(student);
  add_random_walk_prior(c.q, state.sigma2_beta_init[slot], state.sigma2_beta_innovation[slot]);
  return c;
}

double update_innovation_variance(std::span<const double> increments, Rng& rng,
                                  std::optional<double> ss_floor) {
  if (increments.empty()) {
    throw Error(ErrorCode::EmptyInput, "innovation update needs at least one increment");
  }
  double ss = 0.0;
  for (double d : increments) ss += d * d;
  if (ss < kMinSumOfSquares) {
    if (!ss_floor) {
      throw Error(ErrorCode::DegenerateSumOfSquares,
                  "sum of squared increments " + std::to_string(ss) + " below 1e-12");
    }
    ss = std::max(ss, *ss_floor);
  }
  return draw_inverse_gamma(0.5 * static_cast<double>(increments.size()), 0.5 * ss, rng);
}

std::pair<double, double> update_initial_variance_halfcauchy(std::span<const double> values,
                                                             double aux, Rng& rng) {
  double ss = 0.0;
  for (double x : values) ss += x * x;
  const double n = static_cast<double>(values.size());
  const double sigma2 = draw_inverse_gamma(0.5 + 0.5 * n, 1.0 / aux + 0.5 * ss, rng);
  const double next_aux = draw_inverse_gamma(1.0, 1.0 + 1.0 / sigma2, rng);
  return {sigma2, next_aux};
}

void recenter(ChainState& state) {
  if (!state.has_cohort()) {
    throw Error(ErrorCode::VariantMismatch, "recentering requires a cohort trend");
  }
  const std::size_t n = state.n_students;
  const std::size_t T = state.n_times;
  std::vector<double> mean(T, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < T; ++t) mean[t] += state.beta[i * T + t];
  }
  for (auto& m : mean) m /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < T; ++t) state.beta[i * T + t] -= mean[t];
  }
  for (std::size_t t = 0; t < T; ++t) state.mu[t] += mean[t];
}

GibbsSampler::GibbsSampler(const ResponseDataset& data, ModelSpec spec, McmcConfig config)
    : data_(data),
      spec_(spec),
      config_(config),
      cells_(data),
      state_(ChainState::initial(data, spec, config.init)) {
  config_.validate();
  require_dynamic(data_);
  const bool sorted = std::is_sorted(
      data_.observations.begin(), data_.observations.end(),
      [](const Observation& a, const Observation& b) {
        return std::tie(a.student, a.time, a.item) < std::tie(b.student, b.time, b.item);
      });
  if (!sorted) throw Error(ErrorCode::InvalidConfig, "dataset must be validated before fitting");
}

template <class Fn>
void GibbsSampler::for_each_student(Fn&& fn) {
  const std::size_t n = state_.n_students;
  if (config_.workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  tbb::task_arena arena(static_cast<int>(config_.workers));
  arena.execute([&] {
    tbb::parallel_for(tbb::blocked_range<std::size_t>(0, n), [&](const auto& r) {
      for (std::size_t i = r.begin(); i != r.end(); ++i) fn(i);
    });
  });
}

void GibbsSampler::sweep() {
  const std::uint64_t seed = config_.seed;
  const std::uint64_t s = sweep_;

  for_each_student([&](std::size_t i) {
    Rng rng = make_stream(seed, s, StreamPhase::Omega, i);
    draw_omega_range(state_, data_, cells_.student_begin(i), cells_.student_end(i), rng);
  });

  if (spec_.include_cohort()) {
    Rng rng = make_stream(seed, s, StreamPhase::Cohort, 0);
    const CanonicalGaussian c = build_mu_conditional(state_, data_);
    state_.mu = sample_canonical(c.q, c.b, rng);
  }

  for_each_student([&](std::size_t i) {
    Rng rng = make_stream(seed, s, StreamPhase::Deviation, i);
    const CanonicalGaussian c = build_beta_conditional(i, state_, data_);
    const std::vector<double> draw = sample_canonical(c.q, c.b, rng);
    std::copy(draw.begin(), draw.end(), state_.beta_row(i).begin());
  });

  if (spec_.include_cohort()) recenter(state_);
  if (config_.update_variances) update_variances();
  check_divergence();
  ++sweep_;
}

double GibbsSampler::innovation_draw(std::span<const double> increments, Rng& rng) {
  double ss = 0.0;
  for (double d : increments) ss += d * d;
  if (ss < kMinSumOfSquares && config_.ss_floor) ++floored_;
  return update_innovation_variance(increments, rng, config_.ss_floor);
}

void GibbsSampler::update_variances() {
  Rng rng = make_stream(config_.seed, sweep_, StreamPhase::Variance, 0);
  const std::size_t n = state_.n_students;
  const std::size_t T = state_.n_times;
  std::vector<double> increments;

  if (spec_.include_cohort()) {
    increments.resize(T - 1);
    for (std::size_t t = 0; t + 1 < T; ++t) increments[t] = state_.mu[t + 1] - state_.mu[t];
    state_.sigma2_mu_innovation = innovation_draw(increments, rng);
  }

  if (spec_.innovation_sharing() == InnovationSharing::Shared) {
    increments.resize(n * (T - 1));
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = state_.beta_row(i);
      for (std::size_t t = 0; t + 1 < T; ++t) increments[i * (T - 1) + t] = row[t + 1] - row[t];
    }
    state_.sigma2_beta_innovation[0] = innovation_draw(increments, rng);
  } else {
    increments.resize(T - 1);
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = state_.beta_row(i);
      for (std::size_t t = 0; t + 1 < T; ++t) increments[t] = row[t + 1] - row[t];
      state_.sigma2_beta_innovation[i] = innovation_draw(increments, rng);
    }
  }

  if (spec_.include_cohort()) {
    std::tie(state_.sigma2_mu_init, state_.aux_mu_init) =
        update_initial_variance_halfcauchy(state_.mu[0], state_.aux_mu_init, rng);
  }
  if (spec_.innovation_sharing() == InnovationSharing::Shared) {
    std::vector<double> first(n);
    for (std::size_t i = 0; i < n; ++i) first[i] = state_.beta_row(i)[0];
    std::tie(state_.sigma2_beta_init[0], state_.aux_beta_init[0]) =
        update_initial_variance_halfcauchy(first, state_.aux_beta_init[0], rng);
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      std::tie(state_.sigma2_beta_init[i], state_.aux_beta_init[i]) =
          update_initial_variance_halfcauchy(state_.beta_row(i)[0], state_.aux_beta_init[i], rng);
    }
  }
}

void GibbsSampler::check_divergence() const {
  auto bad = [](double v) { return !(std::abs(v) <= kDivergenceBound); };
  if (std::any_of(state_.mu.begin(), state_.mu.end(), bad) ||
      std::any_of(state_.beta.begin(), state_.beta.end(), bad)) {
    throw Error(ErrorCode::ChainDiverged,
                "latent value exceeded 1e6 at sweep " + std::to_string(sweep_));
  }
}

PosteriorDraws run_chain(const ResponseDataset& data, const ModelSpec& spec,
                         const McmcConfig& config) {
  GibbsSampler sampler(data, spec, config);
  const std::size_t N = data.n_students;
  const std::size_t T = data.n_times;

  PosteriorDraws out;
  out.spec = spec;
  out.config = config;
  out.n_students = N;
  out.n_times = T;
  out.n_draws = config.n_keep;
  out.beta_variance_width = sampler.state().sigma2_beta_init.size();
  out.beta.reserve(config.n_keep * N * T);
  if (spec.include_cohort()) {
    out.mu.reserve(config.n_keep * T);
    out.sigma2_mu_init.reserve(config.n_keep);
    out.sigma2_mu_innovation.reserve(config.n_keep);
  }
  out.sigma2_beta_init.reserve(config.n_keep * out.beta_variance_width);
  out.sigma2_beta_innovation.reserve(config.n_keep * out.beta_variance_width);

  for (std::size_t s = 0; s < config.n_burn; ++s) sampler.sweep();
  for (std::size_t k = 0; k < config.n_keep; ++k) {
    for (std::size_t s = 0; s < config.thin; ++s) sampler.sweep();
    const ChainState& st = sampler.state();
    out.beta.insert(out.beta.end(), st.beta.begin(), st.beta.end());
    if (spec.include_cohort()) {
      out.mu.insert(out.mu.end(), st.mu.begin(), st.mu.end());
      out.sigma2_mu_init.push_back(st.sigma2_mu_init);
      out.sigma2_mu_innovation.push_back(st.sigma2_mu_innovation);
    }
    out.sigma2_beta_init.insert(out.sigma2_beta_init.end(), st.sigma2_beta_init.begin(),
                                st.sigma2_beta_init.end());
    out.sigma2_beta_innovation.insert(out.sigma2_beta_innovation.end(),
                                      st.sigma2_beta_innovation.begin(),
                                      st.sigma2_beta_innovation.end());
  }
  out.n_floored_updates = sampler.floored_updates();
  return out;
}

}  // namespace dbird
