#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <numeric>
#include <vector>

#include "pursuit/errors.hpp"
#include "pursuit/support_set.hpp"

namespace pursuit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Length-n vector whose support tracks exactly the nonzero positions.
class SparseSignal {
public:
  SparseSignal() = default;

  explicit SparseSignal(Vector values) : values_(std::move(values)) {
    std::vector<int> idx;
    for (int i = 0; i < values_.size(); ++i) {
      if (values_[i] != 0.0) idx.push_back(i);
    }
    support_ = SupportSet(std::move(idx));
  }

  static SparseSignal zero(int n) { return SparseSignal(Vector::Zero(n)); }

  const Vector& values() const noexcept { return values_; }
  const SupportSet& support() const noexcept { return support_; }
  int length() const noexcept { return static_cast<int>(values_.size()); }
  int sparsity() const noexcept { return support_.size(); }

  friend bool operator==(const SparseSignal& a, const SparseSignal& b) {
    return a.values_.size() == b.values_.size() &&
           (a.values_.array() == b.values_.array()).all();
  }

private:
  Vector values_;
  SupportSet support_;
};

// Permutation sorting |x| nonincreasing, ties broken by ascending index.
struct MagnitudeOrder {
  std::vector<int> permutation;
  std::vector<double> sorted_magnitudes;
};

inline MagnitudeOrder magnitude_order(const Vector& x) {
  MagnitudeOrder order;
  order.permutation.resize(static_cast<std::size_t>(x.size()));
  std::iota(order.permutation.begin(), order.permutation.end(), 0);
  std::stable_sort(order.permutation.begin(), order.permutation.end(),
                   [&x](int a, int b) {
                     return std::abs(x[a]) > std::abs(x[b]);
                   });
  order.sorted_magnitudes.reserve(order.permutation.size());
  for (int i : order.permutation) {
    order.sorted_magnitudes.push_back(std::abs(x[i]));
  }
  return order;
}

}  // namespace pursuit
