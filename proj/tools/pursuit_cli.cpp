// Command-line front end: sparse recovery, RIC computation, bound tables,
// sweeps, partition schedules, and the crossover finder.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "pursuit/bounds.hpp"
#include "pursuit/greedy.hpp"
#include "pursuit/harness.hpp"
#include "pursuit/io.hpp"
#include "pursuit/rip.hpp"

namespace {

using nlohmann::json;
using namespace pursuit;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;   // domain or argument errors
constexpr int kExitIo = 2;      // file errors
constexpr int kExitFinding = 3; // a checked math property failed

Algorithm parse_algorithm(const std::string& name) {
  if (name == "cosamp") return Algorithm::cosamp;
  if (name == "sp") return Algorithm::sp;
  throw argument_error("--algorithm must be 'cosamp' or 'sp', got '" + name +
                       "'");
}

SignalDistribution parse_distribution(const std::string& name) {
  if (name == "gaussian") return SignalDistribution::gaussian();
  if (name == "flat") return SignalDistribution::flat();
  const std::string prefix = "geometric:";
  if (name.rfind(prefix, 0) == 0) {
    return SignalDistribution::geometric(
        std::stod(name.substr(prefix.size())));
  }
  throw argument_error(
      "--distribution must be gaussian, flat, or geometric:<ratio>");
}

// Every run echoes the resolved configuration, defaults included.
void echo_config(const std::string& subcommand, const json& config) {
  std::cerr << "config " << subcommand << " " << config.dump() << "\n";
}

struct OutStream {
  explicit OutStream(const std::string& path) {
    if (!path.empty() && path != "-") {
      file.open(path);
      if (!file) throw io::io_error("cannot open output file " + path);
    }
  }
  std::ostream& get() { return file.is_open() ? file : std::cout; }
  std::ofstream file;
};

struct RecoverArgs {
  std::string algorithm, matrix, measurements, trace, truth;
  int sparsity = 0;
  double epsilon = -1.0;  // <0 means relative default
  int max_iter = 0;
  std::string out;
};

int cmd_recover(const RecoverArgs& a) {
  const Matrix A = io::read_matrix_file(a.matrix);
  const Vector y = io::read_vector_file(a.measurements);

  RecoveryConfig config;
  config.sparsity = a.sparsity;
  if (a.epsilon >= 0.0) config.stopping_error = a.epsilon;
  config.max_iterations = a.max_iter;

  std::optional<SparseSignal> truth;
  if (!a.truth.empty()) {
    truth = SparseSignal(io::read_vector_file(a.truth));
  }

  echo_config("recover",
              {{"algorithm", a.algorithm},
               {"matrix", a.matrix},
               {"measurements", a.measurements},
               {"sparsity", a.sparsity},
               {"epsilon", config.resolved_epsilon(y.norm())},
               {"max_iterations", config.resolved_max_iterations()},
               {"trace", a.trace},
               {"truth", a.truth},
               {"out", a.out.empty() ? "-" : a.out}});

  const RecoveryResult result =
      run(parse_algorithm(a.algorithm), A, y, config, truth);

  if (!a.trace.empty()) {
    std::ofstream ts(a.trace);
    if (!ts) throw io::io_error("cannot open trace file " + a.trace);
    io::write_trace(ts, result.trace);
  }
  OutStream out(a.out);
  io::write_vector(out.get(), result.estimate.values());
  std::cerr << "converged=" << (result.converged ? 1 : 0)
            << " iterations=" << result.iterations_used << "\n";
  return kExitOk;
}

struct RicArgs {
  std::string matrix, method = "exact";
  int order = 0;
  int trials = 100;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_ric(const RicArgs& a) {
  const Matrix A = io::read_matrix_file(a.matrix);
  echo_config("ric", {{"matrix", a.matrix},
                      {"order", a.order},
                      {"method", a.method},
                      {"trials", a.trials},
                      {"seed", a.seed},
                      {"out", a.out.empty() ? "-" : a.out}});
  RicEstimate est;
  if (a.method == "exact") {
    est = exact_ric(A, a.order);
  } else if (a.method == "monte-carlo") {
    est = monte_carlo_ric_lower_bound(A, a.order,
                                      static_cast<std::uint64_t>(a.trials),
                                      a.seed);
  } else {
    throw argument_error("--method must be 'exact' or 'monte-carlo'");
  }
  OutStream out(a.out);
  const json report = {
      {"order", est.order},
      {"delta", est.delta},
      {"method", est.method == RicMethod::exact ? "exact"
                                                : "monte_carlo_lower_bound"},
      {"subsets_examined", est.subsets_examined},
      {"rip_holds", est.rip_holds()}};
  out.get() << report.dump(2) << "\n";
  return kExitOk;
}

struct BoundsArgs {
  double delta = -1.0;
  double delta_min = -1.0;
  double delta_max = -1.0;
  int steps = 0;
  std::string out;
};

int cmd_bounds(const BoundsArgs& a, const char* name) {
  echo_config(name, {{"delta", a.delta},
                     {"delta_min", a.delta_min},
                     {"delta_max", a.delta_max},
                     {"steps", a.steps},
                     {"out", a.out.empty() ? "-" : a.out}});
  std::vector<BoundsRow> rows;
  if (a.delta >= 0.0) {
    rows.push_back(bounds_row(a.delta));
  } else if (a.delta_min >= 0.0 && a.delta_max >= 0.0 && a.steps >= 2) {
    rows = bounds_sweep(a.delta_min, a.delta_max, a.steps);
  } else {
    throw argument_error(
        "need either --delta or all of --delta-min --delta-max --steps");
  }
  OutStream out(a.out);
  io::write_bounds(out.get(), rows);
  return kExitOk;
}

struct ExperimentArgs {
  int m = 0, n = 0, k = 0;
  std::string algorithm;
  int trials = 1;
  std::uint64_t seed = 0;
  double noise_sigma = 0.0;
  std::string distribution = "gaussian";
  double epsilon = -1.0;
  int max_iter = 0;
  int jobs = 1;
  std::string out, summary;
};

int cmd_experiment(const ExperimentArgs& a) {
  TrialConfig config;
  config.m = a.m;
  config.n = a.n;
  config.sparsity = a.k;
  config.algorithm = parse_algorithm(a.algorithm);
  config.signal_distribution = parse_distribution(a.distribution);
  config.noise_sigma = a.noise_sigma;
  config.master_seed = a.seed;
  config.trials = a.trials;
  if (a.epsilon >= 0.0) config.epsilon = a.epsilon;
  config.max_iterations = a.max_iter;

  const json config_echo = {{"m", a.m},
                            {"n", a.n},
                            {"k", a.k},
                            {"algorithm", a.algorithm},
                            {"trials", a.trials},
                            {"seed", a.seed},
                            {"noise_sigma", a.noise_sigma},
                            {"distribution", a.distribution},
                            {"jobs", a.jobs},
                            {"out", a.out.empty() ? "-" : a.out},
                            {"summary", a.summary}};
  echo_config("experiment", config_echo);

  const std::vector<TrialRecord> records = run_trials(config, a.jobs);
  OutStream out(a.out);
  io::write_trials(out.get(), config, records);

  int successes = 0;
  int max_iterations = 0;
  for (const auto& rec : records) {
    if (rec.exact_recovery) {
      ++successes;
      max_iterations = std::max(max_iterations, rec.iterations_used);
    }
  }
  if (!a.summary.empty()) {
    std::ofstream ss(a.summary);
    if (!ss) throw io::io_error("cannot open summary file " + a.summary);
    const json summary = {
        {"config", config_echo},
        {"success_fraction",
         static_cast<double>(successes) / static_cast<double>(a.trials)},
        {"max_iterations", max_iterations},
        {"hypothesis_met_count", nullptr},
        {"violations", 0}};
    ss << summary.dump(2) << "\n";
  }
  return kExitOk;
}

struct DecayArgs {
  int m = 0, n = 0, k = 0;
  std::string algorithm;
  int trials = 1;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_decay(const DecayArgs& a) {
  echo_config("decay", {{"m", a.m},
                        {"n", a.n},
                        {"k", a.k},
                        {"algorithm", a.algorithm},
                        {"trials", a.trials},
                        {"seed", a.seed},
                        {"out", a.out.empty() ? "-" : a.out}});
  const CertifiedReport report = decay_validation(
      a.m, a.n, a.k, parse_algorithm(a.algorithm), a.trials, a.seed);
  OutStream out(a.out);
  json trials_json = json::array();
  for (const auto& o : report.outcomes) {
    trials_json.push_back({{"trial", o.trial},
                           {"delta", o.delta},
                           {"hypothesis_met", o.hypothesis_met},
                           {"violations", o.violations},
                           {"iterations", o.iterations_used}});
  }
  out.get() << json{{"trials", report.trials},
                    {"hypothesis_met_count", report.hypothesis_met_count},
                    {"violations", report.violation_count},
                    {"details", trials_json}}
                   .dump(2)
            << "\n";
  return report.violation_count > 0 ? kExitFinding : kExitOk;
}

struct PartitionArgs {
  std::string signal;
  double delta = 0.0;
  std::string out;
};

int cmd_partition(const PartitionArgs& a) {
  echo_config("partition", {{"signal", a.signal},
                            {"delta", a.delta},
                            {"out", a.out.empty() ? "-" : a.out}});
  const SparseSignal x(io::read_vector_file(a.signal));
  const PartitionSchedule schedule = greedy_partition(x, a.delta);
  json parts = json::array();
  for (std::size_t i = 0; i < schedule.partitions.size(); ++i) {
    parts.push_back({{"indices", schedule.partitions[i].indices()},
                     {"iterations", schedule.iteration_counts[i]}});
  }
  OutStream out(a.out);
  out.get() << json{{"delta", a.delta},
                    {"partitions", parts},
                    {"total", schedule.total}}
                   .dump(2)
            << "\n";
  return kExitOk;
}

struct CrossoverArgs {
  std::string variant = "same_rho";
  std::string out;
};

int cmd_crossover(const CrossoverArgs& a) {
  echo_config("crossover",
              {{"variant", a.variant}, {"out", a.out.empty() ? "-" : a.out}});
  if (a.variant == "dai_rho") {
    throw argument_error(
        "the dai_rho variant needs the original decay constant from the "
        "prior Subspace Pursuit analysis, which this toolkit does not "
        "restate; use same_rho");
  }
  if (a.variant != "same_rho") {
    throw argument_error("--variant must be 'same_rho' or 'dai_rho'");
  }
  const double delta = crossover_delta(DaiVariant::same_rho);
  OutStream out(a.out);
  out.get()
      << json{{"variant", a.variant},
              {"delta", delta},
              {"tolerance", 1e-6},
              {"note",
               "open question: this same_rho crossover (~0.280) does not "
               "reproduce the published comparison range "
               "\"0.0446<δ_{3K}<0.4859\"; the published figure presumably "
               "evaluates Dai's bound with the original work's own decay "
               "constant, which is not restated here"}}
             .dump(2)
      << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Greedy sparse-recovery toolkit: CoSaMP/SP recovery, exact "
               "RIC computation, and convergence-bound tables"};
  app.require_subcommand(1);

  RecoverArgs rec;
  auto* recover = app.add_subcommand("recover", "Run CoSaMP or SP on a "
                                                "matrix/measurement pair");
  recover->add_option("--algorithm", rec.algorithm, "cosamp or sp")
      ->required();
  recover->add_option("--matrix", rec.matrix, "sensing matrix CSV")
      ->required();
  recover->add_option("--measurements", rec.measurements, "measurement vector")
      ->required();
  recover->add_option("--sparsity", rec.sparsity, "sparsity level K")
      ->required();
  recover->add_option("--epsilon", rec.epsilon,
                      "stopping residual norm (default: 1e-10 * ||y||)");
  recover->add_option("--max-iter", rec.max_iter,
                      "iteration cap (default: 6K + 10)");
  recover->add_option("--trace", rec.trace, "per-iteration trace CSV path");
  recover->add_option("--truth", rec.truth,
                      "ground-truth vector for missed-energy columns");
  recover->add_option("--out", rec.out, "estimate output (default: stdout)");

  RicArgs ric;
  auto* ric_cmd =
      app.add_subcommand("ric", "Restricted isometry constant of a matrix");
  ric_cmd->add_option("--matrix", ric.matrix, "matrix CSV")->required();
  ric_cmd->add_option("--order", ric.order, "RIC order K")->required();
  ric_cmd->add_option("--method", ric.method,
                      "exact or monte-carlo (default: exact)");
  ric_cmd->add_option("--trials", ric.trials,
                      "monte-carlo subset samples (default: 100)");
  ric_cmd->add_option("--seed", ric.seed, "monte-carlo seed (default: 0)");
  ric_cmd->add_option("--out", ric.out, "output (default: stdout)");

  BoundsArgs bounds;
  auto* bounds_cmd = app.add_subcommand(
      "bounds", "Convergence-constant table at one delta or over a range");
  auto* sweep_cmd =
      app.add_subcommand("sweep", "Ranged convergence-constant table");
  for (auto* cmd : {bounds_cmd, sweep_cmd}) {
    cmd->add_option("--delta", bounds.delta, "single delta value");
    cmd->add_option("--delta-min", bounds.delta_min, "range start");
    cmd->add_option("--delta-max", bounds.delta_max, "range end (< 1)");
    cmd->add_option("--steps", bounds.steps, "grid size (>= 2)");
    cmd->add_option("--out", bounds.out, "output CSV (default: stdout)");
  }

  ExperimentArgs exp;
  auto* exp_cmd = app.add_subcommand(
      "experiment", "Seeded recovery trials with CSV/JSON reporting");
  exp_cmd->add_option("--m", exp.m, "measurement count")->required();
  exp_cmd->add_option("--n", exp.n, "signal length")->required();
  exp_cmd->add_option("--k", exp.k, "sparsity")->required();
  exp_cmd->add_option("--algorithm", exp.algorithm, "cosamp or sp")
      ->required();
  exp_cmd->add_option("--trials", exp.trials, "trial count")->required();
  exp_cmd->add_option("--seed", exp.seed, "master seed (default: 0)");
  exp_cmd->add_option("--noise-sigma", exp.noise_sigma,
                      "measurement noise std dev (default: 0)");
  exp_cmd->add_option("--distribution", exp.distribution,
                      "gaussian, flat, or geometric:<ratio>");
  exp_cmd->add_option("--epsilon", exp.epsilon, "stopping residual norm");
  exp_cmd->add_option("--max-iter", exp.max_iter, "iteration cap");
  exp_cmd->add_option("--jobs", exp.jobs,
                      "worker threads (default: 1; output is identical "
                      "either way)");
  exp_cmd->add_option("--out", exp.out, "per-trial CSV (default: stdout)");
  exp_cmd->add_option("--summary", exp.summary, "summary JSON path");

  DecayArgs decay;
  auto* decay_cmd = app.add_subcommand(
      "decay", "Per-iteration decay check on RIC-certified instances");
  decay_cmd->add_option("--m", decay.m, "measurement count")->required();
  decay_cmd->add_option("--n", decay.n, "signal length")->required();
  decay_cmd->add_option("--k", decay.k, "sparsity")->required();
  decay_cmd->add_option("--algorithm", decay.algorithm, "cosamp or sp")
      ->required();
  decay_cmd->add_option("--trials", decay.trials, "trial count")->required();
  decay_cmd->add_option("--seed", decay.seed, "master seed (default: 0)");
  decay_cmd->add_option("--out", decay.out, "report JSON (default: stdout)");

  PartitionArgs part;
  auto* part_cmd = app.add_subcommand(
      "partition", "Magnitude-band partition schedule of a signal");
  part_cmd->add_option("--signal", part.signal, "signal vector file")
      ->required();
  part_cmd->add_option("--delta", part.delta, "delta_4K value")->required();
  part_cmd->add_option("--out", part.out, "output (default: stdout)");

  CrossoverArgs cross;
  auto* cross_cmd = app.add_subcommand(
      "crossover", "Delta where the per-K SP constant meets Dai's bound");
  cross_cmd->add_option("--variant", cross.variant,
                        "same_rho (default) or dai_rho");
  cross_cmd->add_option("--out", cross.out, "output (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*recover) return cmd_recover(rec);
    if (*ric_cmd) return cmd_ric(ric);
    if (*bounds_cmd) return cmd_bounds(bounds, "bounds");
    if (*sweep_cmd) return cmd_bounds(bounds, "sweep");
    if (*exp_cmd) return cmd_experiment(exp);
    if (*decay_cmd) return cmd_decay(decay);
    if (*part_cmd) return cmd_partition(part);
    if (*cross_cmd) return cmd_crossover(cross);
  } catch (const pursuit::io::io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
