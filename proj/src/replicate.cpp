#include "dbird/replicate.hpp"

#include <cmath>
#include <cstdio>
#include <mutex>
#include <sstream>

#include <oneapi/tbb/parallel_for.h>
#include <oneapi/tbb/task_arena.h>

#include "dbird/error.hpp"
#include "dbird/metrics.hpp"
#include "json.hpp"

namespace dbird {

namespace {

void finalize(MetricSeries& s) {
  const double n = static_cast<double>(s.values.size());
  s.mean = 0.0;
  for (double v : s.values) s.mean += v;
  s.mean /= n;
  double ss = 0.0;
  for (double v : s.values) ss += (v - s.mean) * (v - s.mean);
  s.sd = s.values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
}

nlohmann::json series_json(const MetricSeries& s) {
  return {{"mean", s.mean}, {"sd", s.sd}, {"values", s.values}};
}

std::string cell(const MetricSeries& s) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f (%.3f)", s.mean, s.sd);
  return buf;
}

}  // namespace

const RecoveryReport& StudyReport::model(const ModelSpec& spec) const {
  for (const auto& m : models) {
    if (m.spec == spec) return m;
  }
  throw Error(ErrorCode::InvalidConfig, "model " + std::string(spec.name()) + " not in report");
}

ReplicationMetrics score_fit(const SimulatedCohort& cohort, const ModelSpec& spec,
                             const McmcConfig& mcmc, double level) {
  const PosteriorDraws draws = run_chain(cohort.data, spec, mcmc);
  const IntervalSummary summary = summarize_draws(draws, level);
  const std::vector<double> means = posterior_means(summary);
  return {mse(cohort.truth.theta, means), empirical_coverage(cohort.truth.theta, summary),
          mciw(summary)};
}

StudyReport replicate_study(const SimConfig& sim, std::span<const ModelSpec> specs,
                            const McmcConfig& mcmc, std::size_t n_reps, std::uint64_t seed,
                            std::size_t workers, const ReplicationProgress& progress) {
  if (n_reps < 1) throw Error(ErrorCode::InvalidConfig, "n_reps must be at least 1");
  if (specs.empty()) throw Error(ErrorCode::InvalidConfig, "no models to compare");
  sim.validate();
  mcmc.validate();

  // results[r][m]
  std::vector<std::vector<ReplicationMetrics>> results(n_reps,
                                                       std::vector<ReplicationMetrics>(specs.size()));
  std::mutex progress_mutex;
  auto run_rep = [&](std::size_t r) {
    SimConfig rep_sim = sim;
    rep_sim.seed = substream_seed(seed, r, StreamPhase::Replication, 0);
    const SimulatedCohort cohort = simulate_cohort(rep_sim);
    for (std::size_t m = 0; m < specs.size(); ++m) {
      McmcConfig rep_mcmc = mcmc;
      rep_mcmc.seed = substream_seed(seed, r, StreamPhase::Replication, 1 + m);
      rep_mcmc.workers = 1;
      results[r][m] = score_fit(cohort, specs[m], rep_mcmc);
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(r, specs[m], results[r][m]);
      }
    }
  };
  if (workers <= 1) {
    for (std::size_t r = 0; r < n_reps; ++r) run_rep(r);
  } else {
    tbb::task_arena arena(static_cast<int>(workers));
    arena.execute([&] { tbb::parallel_for(std::size_t{0}, n_reps, run_rep); });
  }

  StudyReport report;
  report.n_reps = n_reps;
  report.seed = seed;
  report.sd_undefined = n_reps == 1;
  for (std::size_t m = 0; m < specs.size(); ++m) {
    RecoveryReport rr;
    rr.spec = specs[m];
    for (std::size_t r = 0; r < n_reps; ++r) {
      rr.mse.values.push_back(results[r][m].mse);
      rr.ec.values.push_back(results[r][m].ec);
      rr.mciw.values.push_back(results[r][m].mciw);
    }
    finalize(rr.mse);
    finalize(rr.ec);
    finalize(rr.mciw);
    report.models.push_back(std::move(rr));
  }
  return report;
}

double paired_mse_win_fraction(const StudyReport& report, const ModelSpec& a, const ModelSpec& b) {
  const auto& ma = report.model(a).mse.values;
  const auto& mb = report.model(b).mse.values;
  std::size_t wins = 0;
  for (std::size_t r = 0; r < ma.size(); ++r) wins += ma[r] < mb[r] ? 1 : 0;
  return static_cast<double>(wins) / static_cast<double>(ma.size());
}

std::string report_to_json(const StudyReport& report) {
  nlohmann::json j;
  j["n_reps"] = report.n_reps;
  j["seed"] = report.seed;
  j["level"] = report.level;
  j["sd_undefined"] = report.sd_undefined;
  j["models"] = nlohmann::json::array();
  for (const auto& m : report.models) {
    j["models"].push_back({{"model", std::string(m.spec.name())},
                           {"label", std::string(m.spec.label())},
                           {"mse", series_json(m.mse)},
                           {"ec", series_json(m.ec)},
                           {"mciw", series_json(m.mciw)}});
  }
  return j.dump(2) + "\n";
}

std::string format_report_table(const StudyReport& report) {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "%-12s %-16s %-16s %-16s\n", "Model", "MSE", "EC", "MCIW");
  os << line;
  for (const auto& m : report.models) {
    std::snprintf(line, sizeof line, "%-12s %-16s %-16s %-16s\n", std::string(m.spec.label()).c_str(),
                  cell(m.mse).c_str(), cell(m.ec).c_str(), cell(m.mciw).c_str());
    os << line;
  }
  if (report.sd_undefined) os << "(single replication: SDs reported as 0)\n";
  return os.str();
}

}  // namespace dbird
