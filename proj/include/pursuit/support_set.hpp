#pragma once

#include <algorithm>
#include <initializer_list>
#include <string>
#include <vector>

#include "pursuit/errors.hpp"

namespace pursuit {

// Strictly increasing index set over [0, n). The bound n is not stored;
// range checks happen at the point of use against the relevant vector.
class SupportSet {
public:
  SupportSet() = default;

  SupportSet(std::initializer_list<int> indices)
      : SupportSet(std::vector<int>(indices)) {}

  explicit SupportSet(std::vector<int> indices) : indices_(std::move(indices)) {
    std::sort(indices_.begin(), indices_.end());
    indices_.erase(std::unique(indices_.begin(), indices_.end()),
                   indices_.end());
    if (!indices_.empty() && indices_.front() < 0) {
      throw argument_error("SupportSet: negative index " +
                           std::to_string(indices_.front()));
    }
  }

  const std::vector<int>& indices() const noexcept { return indices_; }
  int size() const noexcept { return static_cast<int>(indices_.size()); }
  bool empty() const noexcept { return indices_.empty(); }

  bool contains(int i) const {
    return std::binary_search(indices_.begin(), indices_.end(), i);
  }

  int max_index() const { return indices_.empty() ? -1 : indices_.back(); }

  SupportSet set_union(const SupportSet& other) const {
    std::vector<int> out;
    out.reserve(indices_.size() + other.indices_.size());
    std::set_union(indices_.begin(), indices_.end(), other.indices_.begin(),
                   other.indices_.end(), std::back_inserter(out));
    return SupportSet(std::move(out));
  }

  SupportSet complement(int n) const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(n) - indices_.size());
    auto it = indices_.begin();
    for (int i = 0; i < n; ++i) {
      if (it != indices_.end() && *it == i) {
        ++it;
      } else {
        out.push_back(i);
      }
    }
    return SupportSet(std::move(out));
  }

  friend bool operator==(const SupportSet&, const SupportSet&) = default;

private:
  std::vector<int> indices_;
};

}  // namespace pursuit
