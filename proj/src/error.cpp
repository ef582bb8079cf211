#include "qgdtn/error.hpp"

namespace qgdtn {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NotSimple: return "NotSimple";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::NonPositiveLength: return "NonPositiveLength";
    case ErrorCode::EmptyOuterSet: return "EmptyOuterSet";
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::AtPole: return "AtPole";
    case ErrorCode::InnerBlockSingular: return "InnerBlockSingular";
    case ErrorCode::PatternViolation: return "PatternViolation";
    case ErrorCode::PoleCluster: return "PoleCluster";
    case ErrorCode::ResolutionTooLow: return "ResolutionTooLow";
    case ErrorCode::IndependenceNotAsserted: return "IndependenceNotAsserted";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::NoCycle: return "NoCycle";
    case ErrorCode::NotCommensurable: return "NotCommensurable";
    case ErrorCode::MuOutOfRange: return "MuOutOfRange";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace qgdtn
