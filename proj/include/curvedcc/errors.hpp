#pragma once

#include <stdexcept>
#include <string>

namespace curvedcc {

enum class ErrorCode {
  invalid_argument,
  invalid_config,
  singular_pair,
  projection_pole,
  infeasible_spin,
  degenerate_config,
  not_coplanar,
  gauge_degenerate,
  region_invalid,
  no_mass_solution,
  no_sign_change,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when a pair of bodies collides or sits antipodally (the singular
/// set where the force function is undefined). Indices are zero-based.
class SingularPairError : public Error {
 public:
  SingularPairError(int i, int j);
  int first() const noexcept { return i_; }
  int second() const noexcept { return j_; }

 private:
  int i_;
  int j_;
};

}  // namespace curvedcc
