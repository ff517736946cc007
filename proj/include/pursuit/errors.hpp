#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pursuit {

// Bad caller input: mismatched dimensions, out-of-range indices, invalid flags.
class argument_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A support-restricted system whose columns are numerically dependent.
class singular_support_error : public std::runtime_error {
public:
  singular_support_error(std::string what, std::vector<int> support)
      : std::runtime_error(std::move(what)), support_(std::move(support)) {}

  const std::vector<int>& support() const noexcept { return support_; }

private:
  std::vector<int> support_;
};

// Combinatorial guard tripped (too many subsets to enumerate).
class capacity_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace pursuit
