#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace rmteq {

/// Precondition violated by the caller.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numeric routine failed (non-convergence, NaN, broken Hermiticity).
/// Carries the sample seed when the failure happened inside a Monte Carlo
/// sample so the case can be reproduced in isolation.
class NumericFailure : public std::runtime_error {
 public:
  explicit NumericFailure(const std::string& what,
                          std::optional<std::uint64_t> seed = std::nullopt)
      : std::runtime_error(what), seed_(seed) {}

  std::optional<std::uint64_t> seed() const noexcept { return seed_; }

 private:
  std::optional<std::uint64_t> seed_;
};

/// Gap dispersion requested for a signal with no off-diagonal amplitude.
class UndefinedDispersion : public NumericFailure {
 public:
  using NumericFailure::NumericFailure;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rmteq
