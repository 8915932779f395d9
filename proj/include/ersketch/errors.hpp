#pragma once

#include <stdexcept>
#include <string>

namespace ersketch {

/// Input violates a documented precondition (bad ids, weights, dominance, ...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Request exceeds a hard capability limit (e.g. dense oracle size cap).
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative routine hit its iteration cap without meeting its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ersketch
