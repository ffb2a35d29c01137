#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace syskit {

enum class ErrorCode {
  Parse = 1,
  TriangleInequality,
  Nonmanifold,
  Nonorientable,
  Forest,
  Disconnected,
  NotClosed,
  NotALoop,
  SeedsTooClose,
  EpsilonTooLarge,
  IrregularMetric,
  NotEpimorphic,
  RankDeficit,
  GenusTooLarge,
  NoNontrivialClass,
  TargetUnreachable,
  EpsOutOfRange,
  NonpositiveLength,
  NoSolution,
  BadEll,
  BadParams,
  BadC,
  NonFiniteValues,
  NotSphere,
  MarksTooClose,
  TooFewMarks,
  InductionOverflow,
  BadBranchData,
  Io,
  RefinementNeeded,
  Internal,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace syskit
