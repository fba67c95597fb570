#pragma once

#include <stdexcept>
#include <string>

namespace mindiff {

/// Failure categories shared by the solvers. The experiment runner turns
/// these into per-cell status strings instead of aborting a sweep.
enum class ErrorKind {
  invalid_argument,
  no_formula,       // no weight vector of the requested exactness order exists
  not_unisolvent,   // least-squares system is rank deficient
  stalled,          // simplex hit its iteration cap
  ill_conditioned,  // kernel Gram matrix beyond the precision guard
  precision,        // result failed a post-hoc numerical sanity check
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mindiff
