#include "focuss/error.hpp"

namespace focuss {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::SingularGram: return "SingularGram";
    case ErrorCode::ZeroAnchor: return "ZeroAnchor";
    case ErrorCode::ZeroComponent: return "ZeroComponent";
    case ErrorCode::ExactAtPEqualsOne: return "ExactAtPEqualsOne";
    case ErrorCode::PEqualsOne: return "PEqualsOne";
    case ErrorCode::DegenerateReference: return "DegenerateReference";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InfeasibleDimensions: return "InfeasibleDimensions";
    case ErrorCode::DegenerateNullVector: return "DegenerateNullVector";
    case ErrorCode::AssumptionFailure: return "AssumptionFailure";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::NoExactSolution: return "NoExactSolution";
    case ErrorCode::Schema: return "Schema";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

ErrorKind kind_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::TooLarge:
    case ErrorCode::Schema:
    case ErrorCode::Io:
    case ErrorCode::NotSymmetric:
    case ErrorCode::ZeroAnchor:
    case ErrorCode::ZeroComponent:
    case ErrorCode::ExactAtPEqualsOne:
    case ErrorCode::PEqualsOne:
      return ErrorKind::Input;
    case ErrorCode::InfeasibleDimensions:
      return ErrorKind::Infeasible;
    default:
      return ErrorKind::Solver;
  }
}

}  // namespace focuss
