#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dinglab {

/// Numerical failures that map to CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A node saw d_w d_wbar phi <= threshold; the metric degenerated.
class DegenerateMetricError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A Hermitian form failed its positive-definiteness factorization.
class IndefiniteFormError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t offset)
      : std::runtime_error(msg + " at offset " + std::to_string(offset)),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Bad run configuration; maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dinglab
