#pragma once

#include <stdexcept>
#include <string>

namespace polydense {

/// Raised when an operation's precondition is violated: bad bounds, malformed
/// sequence text, a limit beyond the configured memory budget.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised for filesystem and stream failures.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw PreconditionError(message);
}

}  // namespace polydense
