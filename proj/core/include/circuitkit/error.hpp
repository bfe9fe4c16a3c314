#pragma once

#include <stdexcept>
#include <string>

namespace circuitkit {

// Raised for malformed inputs and violated preconditions. The CLI maps it to
// exit code 1.
class InvalidInput : public std::runtime_error {
 public:
  explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a solver result fails its post-solve constraint audit. This is
// a bug, never an expected outcome.
class AuditFailure : public std::logic_error {
 public:
  explicit AuditFailure(const std::string& what) : std::logic_error(what) {}
};

}  // namespace circuitkit
