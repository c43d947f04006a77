#pragma once

#include <stdexcept>
#include <string>

namespace clugame {

enum class ErrorCode {
  // validation
  DuplicateEdge,
  SelfLoop,
  ZeroShareSum,
  EmptyStrategySet,
  ColorOutOfRange,
  NegativeWeight,
  InvalidProfile,
  MatchingEmpty,
  DegreeTooSmall,
  NoInconsistentCycle,
  NotWeightedShapley,
  ParseError,
  IoError,
  BadArguments,
  // cap exceedances
  SearchSpaceExceeded,
  ChromaticCapExceeded,
  CoalitionCapExceeded,
};

const char* error_code_name(ErrorCode code);

// True for the cap-exceedance family (CLI exit code 2, everything else 1).
bool is_cap_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace clugame
