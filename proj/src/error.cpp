#include "syskit/error.hpp"

namespace syskit {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse: return "PARSE";
    case ErrorCode::TriangleInequality: return "TRIANGLE_INEQUALITY";
    case ErrorCode::Nonmanifold: return "NONMANIFOLD";
    case ErrorCode::Nonorientable: return "NONORIENTABLE";
    case ErrorCode::Forest: return "FOREST";
    case ErrorCode::Disconnected: return "DISCONNECTED";
    case ErrorCode::NotClosed: return "NOT_CLOSED";
    case ErrorCode::NotALoop: return "NOT_A_LOOP";
    case ErrorCode::SeedsTooClose: return "SEEDS_TOO_CLOSE";
    case ErrorCode::EpsilonTooLarge: return "EPSILON_TOO_LARGE";
    case ErrorCode::IrregularMetric: return "IRREGULAR_METRIC";
    case ErrorCode::NotEpimorphic: return "NOT_EPIMORPHIC";
    case ErrorCode::RankDeficit: return "RANK_DEFICIT";
    case ErrorCode::GenusTooLarge: return "GENUS_TOO_LARGE";
    case ErrorCode::NoNontrivialClass: return "NO_NONTRIVIAL_CLASS";
    case ErrorCode::TargetUnreachable: return "TARGET_UNREACHABLE";
    case ErrorCode::EpsOutOfRange: return "EPS_OUT_OF_RANGE";
    case ErrorCode::NonpositiveLength: return "NONPOSITIVE_LENGTH";
    case ErrorCode::NoSolution: return "NO_SOLUTION";
    case ErrorCode::BadEll: return "BAD_ELL";
    case ErrorCode::BadParams: return "BAD_PARAMS";
    case ErrorCode::BadC: return "BAD_C";
    case ErrorCode::NonFiniteValues: return "NON_FINITE_VALUES";
    case ErrorCode::NotSphere: return "NOT_SPHERE";
    case ErrorCode::MarksTooClose: return "MARKS_TOO_CLOSE";
    case ErrorCode::TooFewMarks: return "TOO_FEW_MARKS";
    case ErrorCode::InductionOverflow: return "INDUCTION_OVERFLOW";
    case ErrorCode::BadBranchData: return "BAD_BRANCH_DATA";
    case ErrorCode::Io: return "IO";
    case ErrorCode::RefinementNeeded: return "REFINEMENT_NEEDED";
    case ErrorCode::Internal: return "INTERNAL";
  }
  return "UNKNOWN";
}

}  // namespace syskit
