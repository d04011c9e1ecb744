#include "dbird/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <map>
#include <tuple>

#include "CLI11.hpp"
#include "dbird/error.hpp"
#include "dbird/gibbs.hpp"
#include "dbird/io.hpp"
#include "dbird/metrics.hpp"
#include "dbird/replicate.hpp"
#include "dbird/simulate.hpp"
#include "dbird/static_rasch.hpp"
#include "json.hpp"

namespace dbird::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 1;
constexpr double kCliSsFloor = 1e-10;
constexpr double kSummaryLevel = 0.95;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("DBIRD_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw UsageError("DBIRD_SEED must be a non-negative integer");
    }
  }
  return kDefaultSeed;
}

/// Records one command's provenance; hashes are taken when it is written.
class Manifest {
 public:
  Manifest(std::string subcommand, fs::path out_dir)
      : subcommand_(std::move(subcommand)),
        out_dir_(std::move(out_dir)),
        start_(std::chrono::steady_clock::now()) {}

  json config = json::object();
  std::uint64_t seed = 0;

  void add_input(const fs::path& p) { inputs_.push_back(p); }

  void write_output(const std::string& name, std::string_view content) {
    io::write_file_atomic(out_dir_ / name, content);
    outputs_.push_back(name);
  }
  void record_output(const std::string& name) { outputs_.push_back(name); }

  void finish() {
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    json j;
    j["subcommand"] = subcommand_;
    j["config"] = config;
    j["seed"] = seed;
    j["inputs"] = json::array();
    for (const auto& p : inputs_) {
      j["inputs"].push_back({{"path", p.string()}, {"sha256", io::sha256_file(p)}});
    }
    j["outputs"] = outputs_;
    json hashes = json::object();
    for (const auto& name : outputs_) hashes[name] = io::sha256_file(out_dir_ / name);
    j["hashes"] = hashes;
    j["wall_time_seconds"] = wall;
    io::write_file_atomic(out_dir_ / "manifest.json", j.dump(2) + "\n");
  }

 private:
  std::string subcommand_;
  fs::path out_dir_;
  std::chrono::steady_clock::time_point start_;
  std::vector<fs::path> inputs_;
  std::vector<std::string> outputs_;
};

std::string summary_row(const CellInterval& c) {
  return io::format_double(c.mean) + "," + io::format_double(c.sd) + "," +
         io::format_double(c.lower) + "," + io::format_double(c.upper);
}

// Adds one row per entry of a strided trace (k-th draw at trace[k * width + slot]).
void add_variance_rows(std::string& csv, const std::string& name, const std::vector<double>& trace,
                       std::size_t width, std::size_t slot) {
  std::vector<double> sample;
  sample.reserve(trace.size() / width);
  for (std::size_t k = slot; k < trace.size(); k += width) sample.push_back(trace[k]);
  csv += name + "," + summary_row(summarize_sample(sample, kSummaryLevel)) + "\n";
}

std::string variances_csv(const PosteriorDraws& draws, const io::LabeledDataset& ds) {
  std::string csv = "parameter,mean,sd,q025,q975\n";
  if (draws.has_cohort()) {
    add_variance_rows(csv, "sigma2_mu_init", draws.sigma2_mu_init, 1, 0);
    add_variance_rows(csv, "sigma2_mu_innovation", draws.sigma2_mu_innovation, 1, 0);
  }
  const std::size_t w = draws.beta_variance_width;
  for (std::size_t slot = 0; slot < w; ++slot) {
    const std::string suffix = w == 1 ? "" : "[" + ds.student_ids[slot] + "]";
    add_variance_rows(csv, "sigma2_beta_init" + suffix, draws.sigma2_beta_init, w, slot);
  }
  for (std::size_t slot = 0; slot < w; ++slot) {
    const std::string suffix = w == 1 ? "" : "[" + ds.student_ids[slot] + "]";
    add_variance_rows(csv, "sigma2_beta_innovation" + suffix, draws.sigma2_beta_innovation, w,
                      slot);
  }
  return csv;
}

std::string draws_jsonl(const PosteriorDraws& draws) {
  const std::size_t N = draws.n_students;
  const std::size_t T = draws.n_times;
  const std::size_t w = draws.beta_variance_width;
  std::string out;
  for (std::size_t k = 0; k < draws.n_draws; ++k) {
    json line;
    line["draw"] = k;
    json theta = json::array();
    for (std::size_t i = 0; i < N; ++i) {
      std::vector<double> row(T);
      for (std::size_t t = 0; t < T; ++t) row[t] = draws.theta(k, i, t);
      theta.push_back(row);
    }
    line["theta"] = std::move(theta);
    if (draws.has_cohort()) {
      line["mu"] = std::vector<double>(draws.mu.begin() + k * T, draws.mu.begin() + (k + 1) * T);
      line["sigma2_mu_init"] = draws.sigma2_mu_init[k];
      line["sigma2_mu_innovation"] = draws.sigma2_mu_innovation[k];
    }
    line["sigma2_beta_init"] = std::vector<double>(draws.sigma2_beta_init.begin() + k * w,
                                                   draws.sigma2_beta_init.begin() + (k + 1) * w);
    line["sigma2_beta_innovation"] =
        std::vector<double>(draws.sigma2_beta_innovation.begin() + k * w,
                            draws.sigma2_beta_innovation.begin() + (k + 1) * w);
    out += line.dump();
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string preset = "paper-sim";
  std::optional<std::size_t> students, times, items_per_session, group_split;
  std::optional<std::uint64_t> seed;
  std::string out;
};

SimConfig sim_preset(const std::string& name) {
  if (name == "paper-sim") return SimConfig::paper();
  if (name == "desk-scale") return SimConfig::desk_scale();
  throw UsageError("unknown preset '" + name + "' (expected paper-sim or desk-scale)");
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  SimConfig cfg = sim_preset(a.preset);
  if (a.students) cfg.n_students = *a.students;
  if (a.times) cfg.n_times = *a.times;
  if (a.items_per_session) cfg.items_per_session = *a.items_per_session;
  cfg.group_split = a.group_split ? *a.group_split : cfg.n_students / 2;
  cfg.seed = a.seed ? *a.seed : default_seed();

  const SimulatedCohort cohort = simulate_cohort(cfg);
  const fs::path dir(a.out);
  fs::create_directories(dir);
  Manifest manifest("simulate", dir);
  manifest.seed = cfg.seed;
  manifest.config = {{"preset", a.preset},
                     {"n_students", cfg.n_students},
                     {"n_times", cfg.n_times},
                     {"items_per_session", cfg.items_per_session},
                     {"mu_init_var", cfg.mu_init_var},
                     {"mu_innov_var", cfg.mu_innov_var},
                     {"group_split", cfg.group_split},
                     {"beta_init_var_gamma", {cfg.beta_init_var_gamma.shape, cfg.beta_init_var_gamma.rate}},
                     {"innov_gamma_group_a", {cfg.innov_gamma_group_a.shape, cfg.innov_gamma_group_a.rate}},
                     {"innov_gamma_group_b", {cfg.innov_gamma_group_b.shape, cfg.innov_gamma_group_b.rate}},
                     {"item_noise_var", cfg.item_noise_var}};

  const io::LabeledDataset labeled = io::label_dataset(cohort.data);
  for (const auto& name : io::write_dataset(dir, labeled)) manifest.record_output(name);

  const TrueLatents& truth = cohort.truth;
  std::string theta_csv = "student,time,theta\n";
  for (std::size_t i = 0; i < truth.n_students; ++i) {
    for (std::size_t t = 0; t < truth.n_times; ++t) {
      theta_csv += labeled.student_ids[i] + "," + std::to_string(t) + "," +
                   io::format_double(truth.theta_at(i, t)) + "\n";
    }
  }
  manifest.write_output("truth_theta.csv", theta_csv);
  std::string mu_csv = "time,mu\n";
  for (std::size_t t = 0; t < truth.n_times; ++t) {
    mu_csv += std::to_string(t) + "," + io::format_double(truth.mu[t]) + "\n";
  }
  manifest.write_output("truth_mu.csv", mu_csv);
  manifest.finish();

  out << "simulated " << cohort.data.observations.size() << " responses (N=" << cfg.n_students
      << ", T=" << cfg.n_times << ", " << cfg.items_per_session << " items/session) into "
      << dir.string() << "\n";
  if (!cohort.data.observations.empty()) {
    out << "expected accuracy " << expected_accuracy(truth, cohort.data) << "\n";
  }
  return kSuccess;
}

// ---------------------------------------------------------------------------

struct FitArgs {
  std::string dataset;
  std::string model = "dbird";
  std::size_t burn = 10000, keep = 10000, thin = 1, workers = 1;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> times;
  bool bin_weeks = false;
  bool emit_draws = false;
  std::string out;
};

int cmd_fit(const FitArgs& a, std::ostream& out, std::ostream& err) {
  ModelSpec spec;
  try {
    spec = ModelSpec::from_name(a.model);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const fs::path data_dir(a.dataset);
  io::ReadOptions opts;
  opts.n_times = a.times;
  opts.bin_weeks = a.bin_weeks;
  const io::LabeledDataset ds = io::read_dataset(data_dir, opts);
  require_dynamic(ds.data);

  McmcConfig cfg;
  cfg.n_burn = a.burn;
  cfg.n_keep = a.keep;
  cfg.thin = a.thin;
  cfg.workers = a.workers;
  cfg.seed = a.seed ? *a.seed : default_seed();
  cfg.ss_floor = kCliSsFloor;

  const fs::path dir = a.out.empty() ? data_dir : fs::path(a.out);
  fs::create_directories(dir);
  Manifest manifest("fit", dir);
  manifest.seed = cfg.seed;
  manifest.config = {{"model", std::string(spec.name())}, {"n_burn", cfg.n_burn},
                     {"n_keep", cfg.n_keep},             {"thin", cfg.thin},
                     {"n_students", ds.data.n_students}, {"n_times", ds.data.n_times},
                     {"bin_weeks", a.bin_weeks},         {"level", kSummaryLevel}};
  manifest.add_input(data_dir / "responses.csv");
  manifest.add_input(data_dir / "items.csv");

  const PosteriorDraws draws = run_chain(ds.data, spec, cfg);
  if (draws.n_floored_updates > 0) {
    err << "warning: " << draws.n_floored_updates
        << " innovation-variance updates had a degenerate sum of squares; floored at 1e-10\n";
  }

  const IntervalSummary summary = summarize_draws(draws, kSummaryLevel);
  std::string theta_csv = "student,time,mean,sd,q025,q975\n";
  for (std::size_t i = 0; i < summary.n_students; ++i) {
    for (std::size_t t = 0; t < summary.n_times; ++t) {
      theta_csv += ds.student_ids[i] + "," + std::to_string(t) + "," +
                   summary_row(summary.at(i, t)) + "\n";
    }
  }
  manifest.write_output("theta_summary.csv", theta_csv);

  if (draws.has_cohort()) {
    std::string mu_csv = "time,mean,sd,q025,q975\n";
    std::vector<double> sample(draws.n_draws);
    for (std::size_t t = 0; t < draws.n_times; ++t) {
      for (std::size_t k = 0; k < draws.n_draws; ++k) sample[k] = draws.mu[k * draws.n_times + t];
      mu_csv += std::to_string(t) + "," + summary_row(summarize_sample(sample, kSummaryLevel)) + "\n";
    }
    manifest.write_output("mu_summary.csv", mu_csv);
  }
  manifest.write_output("variances_summary.csv", variances_csv(draws, ds));
  if (a.emit_draws) manifest.write_output("draws.jsonl", draws_jsonl(draws));
  manifest.finish();

  out << "fit " << spec.label() << ": " << draws.n_draws << " draws after " << cfg.n_burn
      << " burn-in sweeps; summaries in " << dir.string() << "\n";
  return kSuccess;
}

// ---------------------------------------------------------------------------

struct EvaluateArgs {
  std::string truth;
  std::string summary;
  std::string out;
};

using CellKey = std::pair<std::string, std::size_t>;

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
  const io::CsvTable truth = io::read_csv(a.truth);
  const io::CsvTable summ = io::read_csv(a.summary);
  const std::size_t t_student = truth.column("student");
  const std::size_t t_time = truth.column("time");
  const std::size_t t_theta = truth.column("theta");
  const std::size_t s_student = summ.column("student");
  const std::size_t s_time = summ.column("time");
  const std::size_t s_mean = summ.column("mean");
  const std::size_t s_lo = summ.column("q025");
  const std::size_t s_hi = summ.column("q975");

  std::map<CellKey, std::size_t> summary_rows;
  for (std::size_t r = 0; r < summ.rows.size(); ++r) {
    CellKey key{summ.rows[r][s_student], io::parse_index(summ.rows[r][s_time], summ, r)};
    if (!summary_rows.emplace(key, r).second) {
      throw Error(ErrorCode::Schema, summ.where(r) + ": duplicate cell");
    }
  }
  if (summary_rows.size() != truth.rows.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "truth has " + std::to_string(truth.rows.size()) + " cells, summary has " +
                    std::to_string(summary_rows.size()));
  }

  std::vector<double> true_theta;
  IntervalSummary intervals;
  intervals.level = kSummaryLevel;
  for (std::size_t r = 0; r < truth.rows.size(); ++r) {
    CellKey key{truth.rows[r][t_student], io::parse_index(truth.rows[r][t_time], truth, r)};
    auto it = summary_rows.find(key);
    if (it == summary_rows.end()) {
      throw Error(ErrorCode::DimensionMismatch,
                  truth.where(r) + ": cell (" + key.first + ", " + std::to_string(key.second) +
                      ") missing from summary");
    }
    true_theta.push_back(io::parse_double(truth.rows[r][t_theta], truth, r));
    const auto& row = summ.rows[it->second];
    CellInterval c;
    c.mean = io::parse_double(row[s_mean], summ, it->second);
    c.lower = io::parse_double(row[s_lo], summ, it->second);
    c.upper = io::parse_double(row[s_hi], summ, it->second);
    intervals.cells.push_back(c);
  }
  intervals.n_students = intervals.cells.size();
  intervals.n_times = 1;

  const double m = mse(true_theta, posterior_means(intervals));
  const double ec = empirical_coverage(true_theta, intervals);
  const double w = mciw(intervals);
  out << "MSE  " << m << "\nEC   " << ec << "\nMCIW " << w << "\n";

  if (!a.out.empty()) {
    const fs::path dir(a.out);
    fs::create_directories(dir);
    Manifest manifest("evaluate", dir);
    manifest.add_input(a.truth);
    manifest.add_input(a.summary);
    manifest.config = {{"level", kSummaryLevel}};
    const json metrics = {{"mse", m}, {"ec", ec}, {"mciw", w}, {"n_cells", true_theta.size()}};
    manifest.write_output("metrics.json", metrics.dump(2) + "\n");
    manifest.finish();
  }
  return kSuccess;
}

// ---------------------------------------------------------------------------

struct StaticMapArgs {
  std::string dataset;
  std::string group_column;
  double prior_sd = 5.0;
  std::optional<std::size_t> times;
  bool bin_weeks = false;
  std::string out;
};

int cmd_static_map(const StaticMapArgs& a, std::ostream& out) {
  if (!(a.prior_sd > 0.0)) throw UsageError("--prior-sd must be positive");
  const fs::path data_dir(a.dataset);
  io::ReadOptions opts;
  opts.n_times = a.times;
  opts.bin_weeks = a.bin_weeks;
  if (!a.group_column.empty()) opts.group_column = a.group_column;
  const io::LabeledDataset ds = io::read_dataset(data_dir, opts);
  const ResponseDataset& data = ds.data;

  struct Group {
    std::size_t student;
    std::size_t time;
    AssessmentSlice slice;
  };
  std::vector<Group> groups;
  if (a.group_column.empty()) {
    // One assessment per (student, time) cell, including empty cells.
    groups.reserve(data.n_students * data.n_times);
    for (std::size_t i = 0; i < data.n_students; ++i) {
      for (std::size_t t = 0; t < data.n_times; ++t) groups.push_back({i, t, {{}, a.prior_sd}});
    }
    for (const auto& o : data.observations) {
      groups[o.student * data.n_times + o.time].slice.responses.push_back(
          {data.items[o.item], o.correct});
    }
  } else {
    std::map<std::pair<std::size_t, std::string>, std::size_t> index;
    for (std::size_t k = 0; k < data.observations.size(); ++k) {
      const Observation& o = data.observations[k];
      auto [it, inserted] = index.emplace(std::pair{o.student, ds.group_labels[k]}, groups.size());
      if (inserted) groups.push_back({o.student, o.time, {{}, a.prior_sd}});
      Group& g = groups[it->second];
      g.time = std::min(g.time, o.time);
      g.slice.responses.push_back({data.items[o.item], o.correct});
    }
    std::stable_sort(groups.begin(), groups.end(), [](const Group& x, const Group& y) {
      return std::tie(x.student, x.time) < std::tie(y.student, y.time);
    });
  }

  std::string csv = "student,time,theta_map,n_items\n";
  for (const auto& g : groups) {
    const MapEstimate est = map_ability(g.slice);
    csv += ds.student_ids[g.student] + "," + std::to_string(g.time) + "," +
           io::format_double(est.theta) + "," + std::to_string(g.slice.responses.size()) + "\n";
  }
  const fs::path dir = a.out.empty() ? data_dir : fs::path(a.out);
  fs::create_directories(dir);
  Manifest manifest("static-map", dir);
  manifest.config = {{"prior_sd", a.prior_sd},
                     {"group_column", a.group_column.empty() ? json(nullptr) : json(a.group_column)}};
  manifest.add_input(data_dir / "responses.csv");
  manifest.add_input(data_dir / "items.csv");
  manifest.write_output("static_map.csv", csv);
  manifest.finish();
  out << "wrote " << groups.size() << " MAP estimates to " << (dir / "static_map.csv").string()
      << "\n";
  return kSuccess;
}

// ---------------------------------------------------------------------------

struct ReplicateArgs {
  std::string preset = "desk-scale";
  std::optional<std::size_t> reps, burn, keep;
  std::size_t thin = 1, workers = 1;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int cmd_replicate(const ReplicateArgs& a, std::ostream& out, std::ostream& err) {
  SimConfig sim = sim_preset(a.preset);
  McmcConfig mcmc;
  std::size_t reps = 0;
  if (a.preset == "desk-scale") {
    reps = 20;
    mcmc.n_burn = 2000;
    mcmc.n_keep = 2000;
  } else {
    reps = 250;
    mcmc.n_burn = 10000;
    mcmc.n_keep = 10000;
  }
  if (a.reps) reps = *a.reps;
  if (a.burn) mcmc.n_burn = *a.burn;
  if (a.keep) mcmc.n_keep = *a.keep;
  mcmc.thin = a.thin;
  mcmc.ss_floor = kCliSsFloor;
  const std::uint64_t seed = a.seed ? *a.seed : default_seed();
  if (reps == 1) err << "warning: a single replication reports SDs as 0\n";

  const std::vector<ModelSpec> specs = {ModelSpec::dbird(), ModelSpec::global_rw(),
                                        ModelSpec::hetero_rw()};
  const StudyReport report = replicate_study(sim, specs, mcmc, reps, seed, a.workers);
  const std::string table = format_report_table(report);
  out << table;

  if (!a.out.empty()) {
    const fs::path dir(a.out);
    fs::create_directories(dir);
    Manifest manifest("replicate", dir);
    manifest.seed = seed;
    manifest.config = {{"preset", a.preset},        {"reps", reps},
                       {"n_burn", mcmc.n_burn},     {"n_keep", mcmc.n_keep},
                       {"thin", mcmc.thin},         {"n_students", sim.n_students},
                       {"n_times", sim.n_times},    {"items_per_session", sim.items_per_session}};
    manifest.write_output("report.json", report_to_json(report));
    manifest.write_output("report.txt", table);
    manifest.finish();
  }
  return kSuccess;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ChainDiverged:
    case ErrorCode::NotPositiveDefinite:
    case ErrorCode::DegenerateSumOfSquares:
    case ErrorCode::NoConvergence:
    case ErrorCode::NonfiniteTilt:
      return kNumerical;
    default:
      return kInput;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dynamic Bayesian item-response trajectories with a cohort trend", "dbird"};
  app.require_subcommand(1);

  SimulateArgs sim_args;
  auto* sim = app.add_subcommand("simulate", "Simulate a cohort with known latent trajectories");
  sim->add_option("--preset", sim_args.preset, "paper-sim or desk-scale")->capture_default_str();
  sim->add_option("--students", sim_args.students, "Number of students");
  sim->add_option("--times", sim_args.times, "Number of sessions");
  sim->add_option("--items-per-session", sim_args.items_per_session, "Items per session");
  sim->add_option("--group-split", sim_args.group_split,
                  "First student of the high-variance group (default N/2)");
  sim->add_option("--seed", sim_args.seed, "Random seed (default $DBIRD_SEED or 1)");
  sim->add_option("--out", sim_args.out, "Output directory")->required();

  FitArgs fit_args;
  auto* fit = app.add_subcommand("fit", "Fit a dynamic model by Gibbs sampling");
  fit->add_option("dataset", fit_args.dataset, "Dataset directory")->required();
  fit->add_option("--model", fit_args.model, "dbird, global-rw or hetero-rw")->capture_default_str();
  fit->add_option("--burn", fit_args.burn, "Burn-in sweeps")->capture_default_str();
  fit->add_option("--keep", fit_args.keep, "Retained draws")->capture_default_str();
  fit->add_option("--thin", fit_args.thin, "Sweeps per retained draw")->capture_default_str();
  fit->add_option("--workers", fit_args.workers, "Worker threads")->capture_default_str();
  fit->add_option("--seed", fit_args.seed, "Random seed (default $DBIRD_SEED or 1)");
  fit->add_option("--times", fit_args.times, "Number of time points (default: from data)");
  fit->add_flag("--bin-weeks", fit_args.bin_weeks, "Time column holds ISO dates; bin into weeks");
  fit->add_flag("--emit-draws", fit_args.emit_draws, "Also write draws.jsonl");
  fit->add_option("--out", fit_args.out, "Output directory (default: dataset directory)");

  EvaluateArgs eval_args;
  auto* eval = app.add_subcommand("evaluate", "Score a theta summary against the truth");
  eval->add_option("--truth", eval_args.truth, "truth_theta.csv")->required();
  eval->add_option("--summary", eval_args.summary, "theta_summary.csv")->required();
  eval->add_option("--out", eval_args.out, "Directory for metrics.json");

  StaticMapArgs map_args;
  auto* smap = app.add_subcommand("static-map", "Per-assessment Rasch MAP abilities");
  smap->add_option("dataset", map_args.dataset, "Dataset directory")->required();
  smap->add_option("--group-column", map_args.group_column,
                   "responses.csv column identifying assessments (default: one per time)");
  smap->add_option("--prior-sd", map_args.prior_sd, "Prior SD of ability")->capture_default_str();
  smap->add_option("--times", map_args.times, "Number of time points (default: from data)");
  smap->add_flag("--bin-weeks", map_args.bin_weeks, "Time column holds ISO dates; bin into weeks");
  smap->add_option("--out", map_args.out, "Output directory (default: dataset directory)");

  ReplicateArgs rep_args;
  auto* rep = app.add_subcommand("replicate", "Run the recovery study and print a results table");
  rep->add_option("--preset", rep_args.preset, "desk-scale or paper-sim")->capture_default_str();
  rep->add_option("--reps", rep_args.reps, "Number of replications");
  rep->add_option("--burn", rep_args.burn, "Burn-in sweeps");
  rep->add_option("--keep", rep_args.keep, "Retained draws");
  rep->add_option("--thin", rep_args.thin, "Sweeps per retained draw")->capture_default_str();
  rep->add_option("--workers", rep_args.workers, "Parallel replications")->capture_default_str();
  rep->add_option("--seed", rep_args.seed, "Master seed (default $DBIRD_SEED or 1)");
  rep->add_option("--out", rep_args.out, "Directory for report.json and report.txt");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (sim->parsed()) return cmd_simulate(sim_args, out);
    if (fit->parsed()) return cmd_fit(fit_args, out, err);
    if (eval->parsed()) return cmd_evaluate(eval_args, out);
    if (smap->parsed()) return cmd_static_map(map_args, out);
    if (rep->parsed()) return cmd_replicate(rep_args, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kInput;
  }
  return kUsage;
}

}  // namespace dbird::cli
