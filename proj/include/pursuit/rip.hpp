#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pursuit/greedy.hpp"
#include "pursuit/sparse_core.hpp"

namespace pursuit {

enum class RicMethod { exact, monte_carlo_lower_bound };

struct RicEstimate {
  int order = 0;                // K
  double delta = 0.0;           // >= 1 means the RIP of this order fails
  RicMethod method = RicMethod::exact;
  std::uint64_t subsets_examined = 0;

  bool rip_holds() const { return delta < 1.0; }
};

namespace detail {

// max(lambda_max - 1, 1 - lambda_min) of the Gram block A_T^t A_T
inline double subset_deviation(const Matrix& A, const std::vector<int>& idx) {
  Matrix sub(A.rows(), static_cast<int>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) {
    sub.col(static_cast<int>(j)) = A.col(idx[j]);
  }
  const Matrix gram = sub.transpose() * sub;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram,
                                            Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  return std::max(ev[ev.size() - 1] - 1.0, 1.0 - ev[0]);
}

}  // namespace detail

// Smallest delta satisfying the restricted isometry definition at order K,
// by enumerating every size-K column subset.
inline RicEstimate exact_ric(const Matrix& A, int K) {
  const int n = static_cast<int>(A.cols());
  if (K < 1 || K > n) {
    throw argument_error("exact_ric: order K = " + std::to_string(K) +
                         " outside [1, " + std::to_string(n) + "]");
  }
  constexpr std::uint64_t kGuard = 1'000'000;
  const std::uint64_t total = binomial_capped(n, K, kGuard);
  if (total > kGuard) {
    throw capacity_error("exact_ric: C(" + std::to_string(n) + ", " +
                         std::to_string(K) + ") exceeds 1e6");
  }
  RicEstimate est;
  est.order = K;
  est.method = RicMethod::exact;
  double delta = 0.0;
  detail::for_each_subset(n, K, [&](const std::vector<int>& idx) {
    delta = std::max(delta, detail::subset_deviation(A, idx));
    ++est.subsets_examined;
  });
  est.delta = delta;
  return est;
}

// Same extremal computation over sampled subsets; a lower bound on delta_K.
inline RicEstimate monte_carlo_ric_lower_bound(const Matrix& A, int K,
                                               std::uint64_t trials,
                                               std::uint64_t seed) {
  const int n = static_cast<int>(A.cols());
  if (K < 1 || K > n) {
    throw argument_error("monte_carlo_ric_lower_bound: order K out of range");
  }
  if (trials < 1) {
    throw argument_error("monte_carlo_ric_lower_bound: trials must be >= 1");
  }
  std::mt19937_64 rng(seed);
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::vector<int> idx(static_cast<std::size_t>(K));
  RicEstimate est;
  est.order = K;
  est.method = RicMethod::monte_carlo_lower_bound;
  double delta = 0.0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
    // partial Fisher-Yates: first K entries are a uniform subset
    for (int i = 0; i < K; ++i) {
      std::uniform_int_distribution<int> pick(i, n - 1);
      std::swap(pool[static_cast<std::size_t>(i)],
                pool[static_cast<std::size_t>(pick(rng))]);
      idx[static_cast<std::size_t>(i)] = pool[static_cast<std::size_t>(i)];
    }
    delta = std::max(delta, detail::subset_deviation(A, idx));
    ++est.subsets_examined;
  }
  est.delta = delta;
  return est;
}

}  // namespace pursuit
