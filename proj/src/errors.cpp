#include "curvedcc/errors.hpp"

namespace curvedcc {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::invalid_config: return "InvalidConfig";
    case ErrorCode::singular_pair: return "SingularPair";
    case ErrorCode::projection_pole: return "ProjectionPole";
    case ErrorCode::infeasible_spin: return "InfeasibleSpin";
    case ErrorCode::degenerate_config: return "DegenerateConfig";
    case ErrorCode::not_coplanar: return "NotCoplanar";
    case ErrorCode::gauge_degenerate: return "GaugeDegenerate";
    case ErrorCode::region_invalid: return "RegionInvalid";
    case ErrorCode::no_mass_solution: return "NoMassSolution";
    case ErrorCode::no_sign_change: return "NoSignChange";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

SingularPairError::SingularPairError(int i, int j)
    : Error(ErrorCode::singular_pair,
            "bodies (" + std::to_string(i) + "," + std::to_string(j) + ") collide or are antipodal"),
      i_(i),
      j_(j) {}

}  // namespace curvedcc
