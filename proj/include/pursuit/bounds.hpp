#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pursuit/sparse_signal.hpp"

namespace pursuit {

class root_not_found : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Decay rate of the CoSaMP missed energy over the merged candidate set:
// rho_4K = sqrt(2 d^2 (1 + 2 d^2) / (1 - d^2)).
inline double rho_cosamp(double delta4k) {
  if (delta4k < 0.0 || delta4k >= 1.0) {
    throw std::domain_error("rho_cosamp: delta must lie in [0, 1)");
  }
  const double d2 = delta4k * delta4k;
  return std::sqrt(2.0 * d2 * (1.0 + 2.0 * d2) / (1.0 - d2));
}

// Decay rate of the SP missed energy over the pruned support:
// rho_3K = sqrt(2 d^2 (1 + d^2)) / (1 - d^2).
inline double rho_sp(double delta3k) {
  if (delta3k < 0.0 || delta3k >= 1.0) {
    throw std::domain_error("rho_sp: delta must lie in [0, 1)");
  }
  const double d2 = delta3k * delta3k;
  return std::sqrt(2.0 * d2 * (1.0 + d2)) / (1.0 - d2);
}

// Estimation-step amplification: tau_1 = sqrt(1 + d3) / (1 - d4).
inline double tau1(double delta3k, double delta4k) {
  if (delta3k < 0.0 || delta4k < 0.0 || delta4k >= 1.0) {
    throw std::domain_error("tau1: need delta3k >= 0 and delta4k in [0, 1)");
  }
  return std::sqrt(1.0 + delta3k) / (1.0 - delta4k);
}

// Noise amplification tau, defined through
// (1 - rho_4K) tau = d4 sqrt(6 (1 + d3)) / (1 - d4) + sqrt(2 (1 + d4)).
inline double noise_tau(double delta3k, double delta4k) {
  const double rho = rho_cosamp(delta4k);
  if (rho >= 1.0) {
    throw std::domain_error("noise_tau: rho_4K >= 1, tau undefined");
  }
  const double numerator =
      delta4k * std::sqrt(6.0 * (1.0 + delta3k)) / (1.0 - delta4k) +
      std::sqrt(2.0 * (1.0 + delta4k));
  return numerator / (1.0 - rho);
}

// gamma = tau + sqrt(2) tau_1, the noise floor in the excess-iteration test.
inline double gamma_constant(double delta3k, double delta4k) {
  return noise_tau(delta3k, delta4k) +
         std::sqrt(2.0) * tau1(delta3k, delta4k);
}

namespace detail {

inline double iteration_constant(double rho, const char* who) {
  if (rho == 0.0) return 1.0;  // continuous limit
  if (rho >= 1.0) {
    throw std::domain_error(std::string(who) +
                            ": decay rate >= 1, bound undefined");
  }
  const double r2 = rho * rho;
  return std::log(4.0 / r2) / std::log(1.0 / r2);
}

}  // namespace detail

// c in the ceil(cK) CoSaMP iteration bound: ln(4/rho^2) / ln(1/rho^2).
inline double iteration_constant_cosamp(double delta4k) {
  return detail::iteration_constant(rho_cosamp(delta4k),
                                    "iteration_constant_cosamp");
}

inline double iteration_constant_sp(double delta3k) {
  return detail::iteration_constant(rho_sp(delta3k), "iteration_constant_sp");
}

enum class DaiVariant { same_rho, dai_rho };

// Dai's per-instance bound 1.5 K / ln(1/rho), pre-ceiling. The same_rho
// variant plugs in this library's rho_3K; dai_rho requires the caller to
// supply the original decay constant, which is not restated here.
inline double dai_iteration_bound(
    double delta3k, int K, DaiVariant variant,
    const std::function<double(double)>& dai_rho = nullptr) {
  double rho;
  if (variant == DaiVariant::same_rho) {
    if (delta3k == 0.0) return 0.0;  // limit as rho -> 0
    rho = rho_sp(delta3k);
  } else {
    if (!dai_rho) {
      throw argument_error(
          "dai_iteration_bound: dai_rho variant requires the prior decay "
          "constant to be supplied");
    }
    rho = dai_rho(delta3k);
    if (rho == 0.0) return 0.0;
  }
  if (rho >= 1.0) {
    throw std::domain_error("dai_iteration_bound: decay rate >= 1");
  }
  return 1.5 * K / std::log(1.0 / rho);
}

// Signal-dependent noiseless iteration count:
// k_min = ln(||x_S|| / x*_K) / ln(1/rho_4K), K = |supp(x)|.
inline double kmin_noiseless(const SparseSignal& x, double delta4k) {
  if (x.sparsity() == 0) {
    throw std::domain_error("kmin_noiseless: zero signal");
  }
  const double rho = rho_cosamp(delta4k);
  if (rho >= 1.0) {
    throw std::domain_error("kmin_noiseless: rho_4K >= 1");
  }
  const MagnitudeOrder order = magnitude_order(x.values());
  const double smallest =
      order.sorted_magnitudes[static_cast<std::size_t>(x.sparsity() - 1)];
  if (rho == 0.0) return 0.0;
  return std::log(x.values().norm() / smallest) / std::log(1.0 / rho);
}

// Smallest integer k >= 0 with
//   x*_{p+q} > rho_4K^k ||x*_{p+1..K}|| + gamma ||e||,
// or empty when the noise floor alone exceeds x*_{p+q}.
inline std::optional<int> excess_iterations(int p, int q,
                                            const SparseSignal& x,
                                            double delta3k, double delta4k,
                                            double e_norm) {
  const int K = x.sparsity();
  if (K == 0) throw std::domain_error("excess_iterations: zero signal");
  if (p < 0 || q < 1 || p + q > K) {
    throw argument_error("excess_iterations: need 0 <= p, 1 <= q, p+q <= K");
  }
  if (e_norm < 0.0) throw argument_error("excess_iterations: e_norm < 0");
  const double rho = rho_cosamp(delta4k);
  if (rho >= 1.0) {
    throw std::domain_error("excess_iterations: rho_4K >= 1");
  }
  const MagnitudeOrder order = magnitude_order(x.values());
  const double target =
      order.sorted_magnitudes[static_cast<std::size_t>(p + q - 1)];
  double tail_sq = 0.0;
  for (int i = p; i < K; ++i) {
    const double m = order.sorted_magnitudes[static_cast<std::size_t>(i)];
    tail_sq += m * m;
  }
  const double floor_term =
      e_norm == 0.0 ? 0.0 : gamma_constant(delta3k, delta4k) * e_norm;
  if (floor_term >= target) return std::nullopt;

  double decayed = std::sqrt(tail_sq);
  int k = 0;
  while (target <= decayed + floor_term) {
    decayed *= rho;
    ++k;
  }
  return k;
}

// Support indices grouped into magnitude bands separated by sqrt(2), with
// a sufficient per-band iteration count.
struct PartitionSchedule {
  std::vector<SupportSet> partitions;       // Q_1..Q_r, original indices
  std::vector<int> iteration_counts;        // k_1..k_r
  int total = 0;
};

inline PartitionSchedule greedy_partition(const SparseSignal& x,
                                          double delta4k) {
  const int K = x.sparsity();
  if (K == 0) throw std::domain_error("greedy_partition: zero signal");
  const double rho = rho_cosamp(delta4k);
  if (rho >= 1.0) {
    throw std::domain_error("greedy_partition: rho_4K >= 1");
  }
  const MagnitudeOrder order = magnitude_order(x.values());

  PartitionSchedule schedule;
  int start = 0;  // zero-based rank of the band's largest magnitude
  while (start < K) {
    const double threshold =
        order.sorted_magnitudes[static_cast<std::size_t>(start)] /
        std::sqrt(2.0);
    int end = start;
    while (end + 1 < K &&
           order.sorted_magnitudes[static_cast<std::size_t>(end + 1)] >
               threshold) {
      ++end;
    }
    std::vector<int> members(
        order.permutation.begin() + start,
        order.permutation.begin() + end + 1);
    schedule.partitions.emplace_back(std::move(members));
    start = end + 1;
  }

  const int r = static_cast<int>(schedule.partitions.size());
  const double log_gain = std::log(1.0 / (rho * rho));
  for (int i = 0; i < r; ++i) {
    double weighted = 0.0;
    for (int j = i; j < r; ++j) {
      weighted += schedule.partitions[static_cast<std::size_t>(j)].size() /
                  std::pow(2.0, j - i);
    }
    const double needed = std::log(2.0 * weighted) / log_gain;
    const int k_i = static_cast<int>(std::floor(needed)) + 1;
    schedule.iteration_counts.push_back(k_i);
    schedule.total += k_i;
  }
  return schedule;
}

// Bisection for a continuous sign-changing function; f(lo) and f(hi) must
// have opposite signs.
inline double bisect(const std::function<double(double)>& f, double lo,
                     double hi, double tol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw root_not_found("bisect: no sign change on [" + std::to_string(lo) +
                         ", " + std::to_string(hi) + "], f = " +
                         std::to_string(flo) + " and " + std::to_string(fhi));
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct ConvergenceThresholds {
  double delta_cosamp_rho1;  // root of rho_4K = 1 (0.5 in closed form)
  double delta_sp_rho1;      // root of rho_3K = 1, bisected to 1e-9
  double delta_lemma2;       // 1/sqrt(3) combination condition
};

inline ConvergenceThresholds convergence_thresholds() {
  ConvergenceThresholds t;
  t.delta_cosamp_rho1 = 0.5;
  t.delta_sp_rho1 =
      bisect([](double d) { return rho_sp(d) - 1.0; }, 0.3, 0.6, 1e-9);
  t.delta_lemma2 = 1.0 / std::sqrt(3.0);
  return t;
}

// delta_3K at which the per-K SP iteration constant crosses Dai's per-K
// bound. K cancels, so the root is computed at K = 1.
inline double crossover_delta(
    DaiVariant variant, const std::function<double(double)>& dai_rho = nullptr) {
  const double upper = convergence_thresholds().delta_sp_rho1 - 1e-6;
  const auto f = [&](double d) {
    return iteration_constant_sp(d) - dai_iteration_bound(d, 1, variant, dai_rho);
  };
  return bisect(f, 1e-6, upper, 1e-6);
}

}  // namespace pursuit
