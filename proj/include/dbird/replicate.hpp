#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dbird/gibbs.hpp"
#include "dbird/simulate.hpp"

namespace dbird {

/// One metric across replications.
struct MetricSeries {
  std::vector<double> values;
  double mean = 0.0;
  double sd = 0.0;  // sample SD; 0 with a single replication
};

/// Recovery of theta for one model across replications.
struct RecoveryReport {
  ModelSpec spec;
  MetricSeries mse;
  MetricSeries ec;
  MetricSeries mciw;
};

struct StudyReport {
  std::size_t n_reps = 0;
  std::uint64_t seed = 0;
  double level = 0.95;
  /// Set when n_reps == 1 and the SDs are reported as 0.
  bool sd_undefined = false;
  std::vector<RecoveryReport> models;

  const RecoveryReport& model(const ModelSpec& spec) const;
};

struct ReplicationMetrics {
  double mse = 0.0;
  double ec = 0.0;
  double mciw = 0.0;
};

/// Fits one model to a simulated cohort and scores theta recovery.
ReplicationMetrics score_fit(const SimulatedCohort& cohort, const ModelSpec& spec,
                             const McmcConfig& mcmc, double level = 0.95);

using ReplicationProgress = std::function<void(std::size_t rep, const ModelSpec& spec,
                                               const ReplicationMetrics& metrics)>;

/// Simulates n_reps cohorts and fits every spec to each one (paired design).
/// Replication r uses seeds derived from (seed, r), so reports are reproducible
/// and independent of `workers`.
StudyReport replicate_study(const SimConfig& sim, std::span<const ModelSpec> specs,
                            const McmcConfig& mcmc, std::size_t n_reps, std::uint64_t seed,
                            std::size_t workers = 1, const ReplicationProgress& progress = {});

/// Fraction of replications in which model `a` has strictly lower MSE than `b`.
double paired_mse_win_fraction(const StudyReport& report, const ModelSpec& a, const ModelSpec& b);

std::string report_to_json(const StudyReport& report);

/// Plain-text table: one row per model, "mean (SD)" per metric.
std::string format_report_table(const StudyReport& report);

}  // namespace dbird
