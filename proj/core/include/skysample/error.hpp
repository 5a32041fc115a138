#pragma once

#include <stdexcept>
#include <string>

namespace skysample {

/// Broken precondition on an API call (dimension mismatch, m > n, ...).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Failure talking to the filesystem: open, read, write, spill.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data is malformed: bad magic, truncated file, unparsable CSV cell,
/// non-finite value.
class DataIntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace skysample
