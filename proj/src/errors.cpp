#include "clugame/errors.hpp"

namespace clugame {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::ZeroShareSum: return "ZeroShareSum";
    case ErrorCode::EmptyStrategySet: return "EmptyStrategySet";
    case ErrorCode::ColorOutOfRange: return "ColorOutOfRange";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::InvalidProfile: return "InvalidProfile";
    case ErrorCode::MatchingEmpty: return "MatchingEmpty";
    case ErrorCode::DegreeTooSmall: return "DegreeTooSmall";
    case ErrorCode::NoInconsistentCycle: return "NoInconsistentCycle";
    case ErrorCode::NotWeightedShapley: return "NotWeightedShapley";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::BadArguments: return "BadArguments";
    case ErrorCode::SearchSpaceExceeded: return "SearchSpaceExceeded";
    case ErrorCode::ChromaticCapExceeded: return "ChromaticCapExceeded";
    case ErrorCode::CoalitionCapExceeded: return "CoalitionCapExceeded";
  }
  return "Unknown";
}

bool is_cap_error(ErrorCode code) {
  return code == ErrorCode::SearchSpaceExceeded ||
         code == ErrorCode::ChromaticCapExceeded ||
         code == ErrorCode::CoalitionCapExceeded;
}

}  // namespace clugame
