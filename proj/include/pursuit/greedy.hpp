#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pursuit/sparse_core.hpp"

namespace pursuit {

enum class Algorithm { cosamp, sp };

inline const char* to_string(Algorithm a) {
  return a == Algorithm::cosamp ? "cosamp" : "sp";
}

struct RecoveryConfig {
  int sparsity = 1;
  // Residual-norm stopping threshold; empty means relative, 1e-10 * ||y||.
  std::optional<double> stopping_error;
  int max_iterations = 0;  // 0 means the 6K + 10 default
  std::optional<SparseSignal> initial_estimate;

  int resolved_max_iterations() const {
    return max_iterations > 0 ? max_iterations : 6 * sparsity + 10;
  }
  double resolved_epsilon(double y_norm) const {
    return stopping_error ? *stopping_error : 1e-10 * y_norm;
  }
};

struct StepRecord {
  SupportSet identified;  // h^n
  SupportSet merged;      // U^n
  Vector ls_estimate;     // u^n, supported on U^n
};

struct TraceRow {
  int iteration = 0;
  SupportSet identified;
  SupportSet merged;
  SupportSet support;  // supp(x^n)
  double residual_norm = 0.0;
  std::optional<double> missed_energy;         // over supp(x^n)
  std::optional<double> missed_energy_merged;  // over U^n
};

using RecoveryTrace = std::vector<TraceRow>;

struct RecoveryResult {
  SparseSignal estimate;
  int iterations_used = 0;
  bool converged = false;
  RecoveryTrace trace;
};

// ||x_true restricted outside estimated_support||_2
inline double missed_energy(const SparseSignal& x_true,
                            const SupportSet& estimated_support) {
  return restrict_to(x_true.values(),
                     estimated_support.complement(x_true.length()))
      .norm();
}

namespace detail {

// Identification: support of the largest proxy entries, zero entries excluded.
inline SupportSet identify(const Matrix& A, const Vector& r, int count) {
  const Vector proxy = A.transpose() * r;
  const int k = std::min<int>(count, static_cast<int>(proxy.size()));
  return hard_threshold(proxy, k).support();
}

}  // namespace detail

// One CoSaMP iteration: identify 2K proxy entries, merge, least-squares
// estimate on the merged set, prune back to K.
inline std::pair<SparseSignal, StepRecord> cosamp_step(const Matrix& A,
                                                       const Vector& y,
                                                       const SparseSignal& previous,
                                                       int K) {
  StepRecord rec;
  const Vector r = residual(A, previous.values(), y);
  rec.identified = detail::identify(A, r, 2 * K);
  rec.merged = previous.support().set_union(rec.identified);
  rec.ls_estimate =
      least_squares_on_support(A, y, rec.merged, RankPolicy::min_norm);
  SparseSignal next = hard_threshold(rec.ls_estimate, K);
  return {std::move(next), std::move(rec)};
}

// One SP iteration. Unlike CoSaMP, the pruned support is re-fit by a second
// least-squares solve before the iteration ends.
inline std::pair<SparseSignal, StepRecord> sp_step(const Matrix& A,
                                                   const Vector& y,
                                                   const SparseSignal& previous,
                                                   int K) {
  StepRecord rec;
  const Vector r = residual(A, previous.values(), y);
  rec.identified = detail::identify(A, r, K);
  rec.merged = previous.support().set_union(rec.identified);
  rec.ls_estimate =
      least_squares_on_support(A, y, rec.merged, RankPolicy::min_norm);
  const SupportSet pruned = hard_threshold(rec.ls_estimate, K).support();
  SparseSignal next(
      least_squares_on_support(A, y, pruned, RankPolicy::min_norm));
  return {std::move(next), std::move(rec)};
}

inline RecoveryResult run(Algorithm algorithm, const Matrix& A, const Vector& y,
                          const RecoveryConfig& config,
                          const std::optional<SparseSignal>& ground_truth = {}) {
  if (config.sparsity < 1) {
    throw argument_error("run: sparsity must be >= 1");
  }
  if (y.size() != A.rows()) {
    throw argument_error("run: y has length " + std::to_string(y.size()) +
                         ", A has " + std::to_string(A.rows()) + " rows");
  }
  const int n = static_cast<int>(A.cols());
  const int K = config.sparsity;
  const double eps = config.resolved_epsilon(y.norm());
  const int max_iter = config.resolved_max_iterations();

  SparseSignal x =
      config.initial_estimate ? *config.initial_estimate : SparseSignal::zero(n);
  if (x.length() != n) {
    throw argument_error("run: initial estimate has length " +
                         std::to_string(x.length()) + ", expected " +
                         std::to_string(n));
  }
  if (x.sparsity() > K) {
    throw argument_error("run: initial estimate support exceeds sparsity K");
  }

  RecoveryResult result;
  result.converged = false;
  for (int iter = 1; iter <= max_iter; ++iter) {
    if (residual(A, x.values(), y).norm() <= eps) {
      result.converged = true;
      break;
    }
    std::pair<SparseSignal, StepRecord> step;
    try {
      step = algorithm == Algorithm::cosamp ? cosamp_step(A, y, x, K)
                                            : sp_step(A, y, x, K);
    } catch (const singular_support_error& e) {
      throw singular_support_error(
          "iteration " + std::to_string(iter) + ": " + e.what(), e.support());
    }
    x = std::move(step.first);
    result.iterations_used = iter;

    TraceRow row;
    row.iteration = iter;
    row.identified = std::move(step.second.identified);
    row.merged = std::move(step.second.merged);
    row.support = x.support();
    row.residual_norm = residual(A, x.values(), y).norm();
    if (ground_truth) {
      row.missed_energy = missed_energy(*ground_truth, row.support);
      row.missed_energy_merged = missed_energy(*ground_truth, row.merged);
    }
    result.trace.push_back(std::move(row));
  }
  if (!result.converged) {
    result.converged = residual(A, x.values(), y).norm() <= eps;
  }
  result.estimate = std::move(x);
  return result;
}

// C(n, k) capped at `cap`; returns cap + 1 once the cap is exceeded.
inline std::uint64_t binomial_capped(int n, int k, std::uint64_t cap) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t c = 1;
  for (int i = 1; i <= k; ++i) {
    // c * (n - k + i) / i is exact at every step
    const double next = static_cast<double>(c) * (n - k + i) / i;
    if (next > static_cast<double>(cap)) return cap + 1;
    c = c * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return c;
}

namespace detail {

// Lexicographic combination walk; visit(indices) for every size-k subset.
template <typename Visit>
void for_each_subset(int n, int k, Visit&& visit) {
  if (k > n) return;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    visit(idx);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) {
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
}

}  // namespace detail

// Brute-force best K-sparse least-squares fit over all size-K supports.
// Ties go to the lexicographically smallest support (first visited).
inline SparseSignal exhaustive_oracle_recovery(const Matrix& A, const Vector& y,
                                               int K) {
  const int n = static_cast<int>(A.cols());
  constexpr std::uint64_t kGuard = 1'000'000;
  if (binomial_capped(n, K, kGuard) > kGuard) {
    throw capacity_error("exhaustive_oracle_recovery: C(" + std::to_string(n) +
                         ", " + std::to_string(K) + ") exceeds 1e6");
  }
  Vector best = Vector::Zero(n);
  double best_res = residual(A, best, y).norm();
  detail::for_each_subset(n, K, [&](const std::vector<int>& idx) {
    const SupportSet T{std::vector<int>(idx)};
    const Vector z = least_squares_on_support(A, y, T, RankPolicy::min_norm);
    const double res = residual(A, z, y).norm();
    if (res < best_res) {
      best_res = res;
      best = z;
    }
  });
  return SparseSignal(std::move(best));
}

}  // namespace pursuit
