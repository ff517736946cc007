#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "pursuit/bounds.hpp"
#include "pursuit/greedy.hpp"
#include "pursuit/rip.hpp"

namespace pursuit {

// splitmix64 step; the per-trial seed stream is
//   mix(master + (trial_index + 1) * 0x9E3779B97F4A7C15)
// and sub-streams (matrix, signal, noise) advance the same way.
inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

// i.i.d. N(0, 1/m) entries, so columns have unit expected squared norm.
inline Matrix gaussian_sensing_matrix(int m, int n, std::uint64_t seed) {
  if (m < 1 || n < 1) {
    throw argument_error("gaussian_sensing_matrix: m, n must be >= 1");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  Matrix A(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      A(i, j) = normal(rng) * scale;
    }
  }
  return A;
}

struct SignalDistribution {
  enum class Kind { gaussian, flat, geometric } kind = Kind::gaussian;
  double ratio = 0.5;  // geometric only

  static SignalDistribution gaussian() { return {Kind::gaussian, 0.0}; }
  static SignalDistribution flat() { return {Kind::flat, 0.0}; }
  static SignalDistribution geometric(double r) { return {Kind::geometric, r}; }
};

inline SparseSignal random_sparse_signal(int n, int K,
                                         const SignalDistribution& dist,
                                         std::uint64_t seed) {
  if (K < 0 || K > n) {
    throw argument_error("random_sparse_signal: K outside [0, n]");
  }
  std::mt19937_64 rng(seed);
  std::vector<int> pool(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
  for (int i = 0; i < K; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(pool[static_cast<std::size_t>(i)],
              pool[static_cast<std::size_t>(pick(rng))]);
  }
  std::vector<int> support(pool.begin(), pool.begin() + K);

  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> coin(0, 1);
  Vector values = Vector::Zero(n);
  double magnitude = 1.0;
  for (int i = 0; i < K; ++i) {
    const int idx = support[static_cast<std::size_t>(i)];
    switch (dist.kind) {
      case SignalDistribution::Kind::gaussian: {
        double v = 0.0;
        while (v == 0.0) v = normal(rng);
        values[idx] = v;
        break;
      }
      case SignalDistribution::Kind::flat:
        values[idx] = coin(rng) ? 1.0 : -1.0;
        break;
      case SignalDistribution::Kind::geometric:
        values[idx] = (coin(rng) ? 1.0 : -1.0) * magnitude;
        magnitude *= dist.ratio;
        break;
    }
  }
  return SparseSignal(std::move(values));
}

struct TrialConfig {
  int m = 0;
  int n = 0;
  int sparsity = 0;
  Algorithm algorithm = Algorithm::cosamp;
  SignalDistribution signal_distribution = SignalDistribution::gaussian();
  double noise_sigma = 0.0;
  std::uint64_t master_seed = 0;
  int trials = 1;
  std::optional<double> epsilon;
  int max_iterations = 0;  // 0 = default

  void validate() const {
    if (sparsity < 1 || sparsity > m || m > n) {
      throw argument_error("TrialConfig: need 1 <= K <= m <= n");
    }
    if (trials < 1) throw argument_error("TrialConfig: trials must be >= 1");
    if (noise_sigma < 0.0) {
      throw argument_error("TrialConfig: noise_sigma must be >= 0");
    }
  }
};

struct TrialRecord {
  int trial = 0;
  std::uint64_t seed = 0;
  int iterations_used = 0;
  bool converged = false;
  bool exact_recovery = false;
  double relative_error = std::numeric_limits<double>::quiet_NaN();
  std::optional<int> theoretical_bound;
  std::string error;  // nonempty when the trial aborted
};

namespace detail {

struct TrialInstance {
  Matrix A;
  SparseSignal x_true;
  Vector y;
};

inline TrialInstance make_instance(const TrialConfig& config, int trial) {
  const std::uint64_t trial_seed = derive_seed(config.master_seed,
                                               static_cast<std::uint64_t>(trial));
  TrialInstance inst;
  inst.A = gaussian_sensing_matrix(config.m, config.n, derive_seed(trial_seed, 1));
  inst.x_true = random_sparse_signal(config.n, config.sparsity,
                                     config.signal_distribution,
                                     derive_seed(trial_seed, 2));
  inst.y = inst.A * inst.x_true.values();
  if (config.noise_sigma > 0.0) {
    std::mt19937_64 rng(derive_seed(trial_seed, 3));
    std::normal_distribution<double> normal(0.0, config.noise_sigma);
    for (int i = 0; i < inst.y.size(); ++i) inst.y[i] += normal(rng);
  }
  return inst;
}

inline bool is_exact_recovery(const SparseSignal& truth,
                              const SparseSignal& estimate,
                              double* relative_error) {
  const double denom = truth.values().norm();
  *relative_error = denom == 0.0
                        ? estimate.values().norm()
                        : (estimate.values() - truth.values()).norm() / denom;
  return estimate.support() == truth.support() && *relative_error <= 1e-8;
}

}  // namespace detail

inline std::vector<TrialRecord> run_trials(const TrialConfig& config,
                                           int jobs = 1) {
  config.validate();
  std::vector<TrialRecord> records(static_cast<std::size_t>(config.trials));

  const auto work = [&](int trial) {
    TrialRecord& rec = records[static_cast<std::size_t>(trial)];
    rec.trial = trial;
    rec.seed = derive_seed(config.master_seed, static_cast<std::uint64_t>(trial));
    try {
      const detail::TrialInstance inst = detail::make_instance(config, trial);
      RecoveryConfig rc;
      rc.sparsity = config.sparsity;
      rc.stopping_error = config.epsilon;
      rc.max_iterations = config.max_iterations;
      const RecoveryResult result =
          run(config.algorithm, inst.A, inst.y, rc, inst.x_true);
      rec.iterations_used = result.iterations_used;
      rec.converged = result.converged;
      rec.exact_recovery = detail::is_exact_recovery(
          inst.x_true, result.estimate, &rec.relative_error);
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
  };

  if (jobs <= 1) {
    for (int t = 0; t < config.trials; ++t) work(t);
  } else {
    std::vector<std::thread> pool;
    const int threads = std::min(jobs, config.trials);
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (int t = w; t < config.trials; t += threads) work(t);
      });
    }
    for (auto& th : pool) th.join();
  }
  return records;
}

// Per-trial outcome of a RIC-certified property check.
struct CertifiedTrialOutcome {
  int trial = 0;
  double delta = 0.0;
  bool hypothesis_met = false;
  int violations = 0;
  int iterations_used = 0;
  std::optional<int> bound;  // iteration-bound experiment only
};

struct CertifiedReport {
  int trials = 0;
  int hypothesis_met_count = 0;
  int violation_count = 0;
  int max_iterations_observed = 0;
  std::vector<CertifiedTrialOutcome> outcomes;
};

namespace detail {

inline int ric_order(Algorithm algorithm, int K) {
  return algorithm == Algorithm::cosamp ? 4 * K : 3 * K;
}

inline void check_certified_preconditions(int m, int n, int K,
                                          Algorithm algorithm) {
  const int order = ric_order(algorithm, K);
  if (order > m) {
    throw argument_error("certified experiment: RIC order " +
                         std::to_string(order) + " exceeds m = " +
                         std::to_string(m));
  }
  constexpr std::uint64_t kGuard = 1'000'000;
  if (binomial_capped(n, order, kGuard) > kGuard) {
    throw capacity_error("certified experiment: C(n, order) exceeds 1e6");
  }
}

}  // namespace detail

// Checks the per-iteration missed-energy contraction on noiseless instances
// whose RIC is computed exactly. Instances whose delta puts the decay rate
// at or above 1 are reported as hypothesis-not-met, not as failures.
inline CertifiedReport decay_validation(int m, int n, int K,
                                        Algorithm algorithm, int trials,
                                        std::uint64_t seed) {
  detail::check_certified_preconditions(m, n, K, algorithm);
  const int order = detail::ric_order(algorithm, K);
  const double rho_limit =
      algorithm == Algorithm::cosamp ? 0.5 : convergence_thresholds().delta_sp_rho1;

  TrialConfig config;
  config.m = m;
  config.n = n;
  config.sparsity = K;
  config.algorithm = algorithm;
  config.master_seed = seed;
  config.trials = trials;

  CertifiedReport report;
  report.trials = trials;
  for (int t = 0; t < trials; ++t) {
    const detail::TrialInstance inst = detail::make_instance(config, t);
    CertifiedTrialOutcome out;
    out.trial = t;
    out.delta = exact_ric(inst.A, order).delta;
    out.hypothesis_met = out.delta < rho_limit;
    if (out.hypothesis_met) {
      ++report.hypothesis_met_count;
      const double rho = algorithm == Algorithm::cosamp
                             ? rho_cosamp(out.delta)
                             : rho_sp(out.delta);
      RecoveryConfig rc;
      rc.sparsity = K;
      const RecoveryResult result =
          run(algorithm, inst.A, inst.y, rc, inst.x_true);
      out.iterations_used = result.iterations_used;
      for (std::size_t i = 1; i < result.trace.size(); ++i) {
        const auto& prev = result.trace[i - 1];
        const auto& cur = result.trace[i];
        const double before = algorithm == Algorithm::cosamp
                                  ? *prev.missed_energy_merged
                                  : *prev.missed_energy;
        const double after = algorithm == Algorithm::cosamp
                                 ? *cur.missed_energy_merged
                                 : *cur.missed_energy;
        if (after > rho * before + 1e-10) ++out.violations;
      }
      report.violation_count += out.violations;
      report.max_iterations_observed =
          std::max(report.max_iterations_observed, out.iterations_used);
    }
    report.outcomes.push_back(out);
  }
  return report;
}

// Checks iterations_used <= ceil(cK) on noiseless instances with exactly
// computed delta below 1/sqrt(5).
inline CertifiedReport iteration_bound_experiment(int m, int n, int K,
                                                  Algorithm algorithm,
                                                  int trials,
                                                  std::uint64_t seed) {
  detail::check_certified_preconditions(m, n, K, algorithm);
  const int order = detail::ric_order(algorithm, K);
  const double hypothesis_limit = 1.0 / std::sqrt(5.0);

  TrialConfig config;
  config.m = m;
  config.n = n;
  config.sparsity = K;
  config.algorithm = algorithm;
  config.master_seed = seed;
  config.trials = trials;

  CertifiedReport report;
  report.trials = trials;
  for (int t = 0; t < trials; ++t) {
    const detail::TrialInstance inst = detail::make_instance(config, t);
    CertifiedTrialOutcome out;
    out.trial = t;
    out.delta = exact_ric(inst.A, order).delta;
    out.hypothesis_met = out.delta < hypothesis_limit;
    if (out.hypothesis_met) {
      ++report.hypothesis_met_count;
      const double c = algorithm == Algorithm::cosamp
                           ? iteration_constant_cosamp(out.delta)
                           : iteration_constant_sp(out.delta);
      out.bound = static_cast<int>(std::ceil(c * K));
      RecoveryConfig rc;
      rc.sparsity = K;
      rc.max_iterations = *out.bound + 10;
      const RecoveryResult result =
          run(algorithm, inst.A, inst.y, rc, inst.x_true);
      out.iterations_used = result.iterations_used;
      if (out.iterations_used > *out.bound) ++out.violations;
      report.violation_count += out.violations;
      report.max_iterations_observed =
          std::max(report.max_iterations_observed, out.iterations_used);
    }
    report.outcomes.push_back(out);
  }
  return report;
}

struct BoundsRow {
  double delta = 0.0;
  double rho_4k = 0.0;
  double rho_3k = 0.0;
  double c_cosamp = 0.0;
  double c_sp = 0.0;
  double dai_per_k_same_rho = 0.0;
  std::optional<double> dai_per_k_variant;  // dai_rho, when supplied
};

inline BoundsRow bounds_row(double delta,
                            const std::function<double(double)>& dai_rho =
                                nullptr) {
  constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
  const auto guarded = [&](auto&& f) {
    try {
      return f();
    } catch (const std::domain_error&) {
      return kNan;
    }
  };
  BoundsRow row;
  row.delta = delta;
  row.rho_4k = guarded([&] { return rho_cosamp(delta); });
  row.rho_3k = guarded([&] { return rho_sp(delta); });
  row.c_cosamp = guarded([&] { return iteration_constant_cosamp(delta); });
  row.c_sp = guarded([&] { return iteration_constant_sp(delta); });
  row.dai_per_k_same_rho =
      guarded([&] { return dai_iteration_bound(delta, 1, DaiVariant::same_rho); });
  if (dai_rho) {
    row.dai_per_k_variant = guarded(
        [&] { return dai_iteration_bound(delta, 1, DaiVariant::dai_rho, dai_rho); });
  }
  return row;
}

inline std::vector<BoundsRow> bounds_sweep(double delta_min, double delta_max,
                                           int steps) {
  if (!(0.0 <= delta_min && delta_min < delta_max && delta_max < 1.0)) {
    throw argument_error("bounds_sweep: need 0 <= delta_min < delta_max < 1");
  }
  if (steps < 2) throw argument_error("bounds_sweep: steps must be >= 2");
  std::vector<BoundsRow> rows;
  rows.reserve(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    const double delta =
        delta_min + (delta_max - delta_min) * i / (steps - 1);
    rows.push_back(bounds_row(delta));
  }
  return rows;
}

}  // namespace pursuit
