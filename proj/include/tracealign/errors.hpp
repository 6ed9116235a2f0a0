#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tracealign {

// Input text violates the trace grammar. Carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::uint64_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::uint64_t line() const noexcept { return line_; }

 private:
  std::uint64_t line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameter or flag combination, rejected before any work starts.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Projected spill size exceeds the disk budget.
class QuotaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Requested in-memory matrix does not fit the memory budget.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A cost value does not fit the store's cell width.
class OverflowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A stored matrix cell cannot be explained by any neighbor during
// backtracking; the matrix (or its spill file) is damaged.
class CorruptionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// API misuse: out-of-order row writes, reads of unwritten rows, shape
// mismatches, invalid warp paths.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace tracealign
