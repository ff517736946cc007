#pragma once

#include <Eigen/Dense>
#include <string>

#include "pursuit/errors.hpp"
#include "pursuit/sparse_signal.hpp"
#include "pursuit/support_set.hpp"

namespace pursuit {

// x restricted to B: entries in B kept, everything else zeroed.
inline Vector restrict_to(const Vector& x, const SupportSet& B) {
  if (B.max_index() >= x.size()) {
    throw argument_error("restrict_to: index " +
                         std::to_string(B.max_index()) +
                         " out of range for length " +
                         std::to_string(x.size()));
  }
  Vector out = Vector::Zero(x.size());
  for (int i : B.indices()) out[i] = x[i];
  return out;
}

// Keep the K largest-magnitude entries of v; ties go to the lower index.
inline SparseSignal hard_threshold(const Vector& v, int K) {
  if (K < 0 || K > v.size()) {
    throw argument_error("hard_threshold: K = " + std::to_string(K) +
                         " outside [0, " + std::to_string(v.size()) + "]");
  }
  const MagnitudeOrder order = magnitude_order(v);
  Vector out = Vector::Zero(v.size());
  for (int i = 0; i < K; ++i) {
    const int idx = order.permutation[static_cast<std::size_t>(i)];
    out[idx] = v[idx];
  }
  return SparseSignal(std::move(out));
}

enum class RankPolicy {
  require_full_rank,  // dependent columns raise singular_support_error
  min_norm            // dependent columns fall back to the min-norm solution
};

namespace detail {

inline Matrix columns(const Matrix& A, const SupportSet& T) {
  Matrix sub(A.rows(), T.size());
  int j = 0;
  for (int i : T.indices()) sub.col(j++) = A.col(i);
  return sub;
}

}  // namespace detail

// argmin over supp(z) ⊆ T of ||y - A z||, returned as a full length-n vector.
// Rank tolerance is 1e-10 times the largest restricted column norm.
inline Vector least_squares_on_support(
    const Matrix& A, const Vector& y, const SupportSet& T,
    RankPolicy policy = RankPolicy::require_full_rank) {
  if (y.size() != A.rows()) {
    throw argument_error("least_squares_on_support: y has length " +
                         std::to_string(y.size()) + ", A has " +
                         std::to_string(A.rows()) + " rows");
  }
  if (T.max_index() >= A.cols()) {
    throw argument_error("least_squares_on_support: support index " +
                         std::to_string(T.max_index()) +
                         " out of range for " + std::to_string(A.cols()) +
                         " columns");
  }
  Vector out = Vector::Zero(A.cols());
  if (T.empty()) return out;

  const Matrix sub = detail::columns(A, T);
  const double max_col_norm = sub.colwise().norm().maxCoeff();
  const double rank_tol = 1e-10 * max_col_norm;

  Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
  cod.setThreshold(1e-10);  // relative to the largest pivot ~ max column norm
  cod.compute(sub);
  if (cod.rank() < T.size()) {
    if (policy == RankPolicy::require_full_rank || max_col_norm == 0.0 ||
        sub.colwise().norm().minCoeff() <= rank_tol) {
      throw singular_support_error(
          "least_squares_on_support: rank-deficient restricted system (rank " +
              std::to_string(cod.rank()) + " of " + std::to_string(T.size()) +
              ")",
          T.indices());
    }
  }
  const Vector coeffs = cod.solve(y);
  int j = 0;
  for (int i : T.indices()) out[i] = coeffs[j++];
  return out;
}

inline Vector residual(const Matrix& A, const Vector& x, const Vector& y) {
  if (x.size() != A.cols() || y.size() != A.rows()) {
    throw argument_error("residual: dimension mismatch (A is " +
                         std::to_string(A.rows()) + "x" +
                         std::to_string(A.cols()) + ", x length " +
                         std::to_string(x.size()) + ", y length " +
                         std::to_string(y.size()) + ")");
  }
  return y - A * x;
}

}  // namespace pursuit
