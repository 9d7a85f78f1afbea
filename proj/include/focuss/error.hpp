#pragma once

#include <stdexcept>
#include <string>

namespace focuss {

// Error categories map onto the CLI exit-code contract.
enum class ErrorKind { Input = 2, Solver = 3, Infeasible = 4 };

enum class ErrorCode {
  NotSymmetric,
  Singular,
  SingularGram,
  ZeroAnchor,
  ZeroComponent,
  ExactAtPEqualsOne,
  PEqualsOne,
  DegenerateReference,
  InvalidArgument,
  InfeasibleDimensions,
  DegenerateNullVector,
  AssumptionFailure,
  TooLarge,
  NoExactSolution,
  Schema,
  Io,
};

const char* to_string(ErrorCode code);
ErrorKind kind_of(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorKind kind() const noexcept { return kind_of(code_); }
  int exit_code() const noexcept { return static_cast<int>(kind()); }

 private:
  ErrorCode code_;
};

}  // namespace focuss
