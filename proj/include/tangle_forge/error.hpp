#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tangle_forge {

enum class ErrorCode {
  InvalidSystem,
  InconsistentInput,
  GroundMismatch,
  MissingCapability,
  LeafHasNoSep,
  MalformedTree,
  NotAStructureTree,
  NotOrdered,
  NodeCapExceeded,
  NonStandardFamily,
  NotParentChild,
  UnresolvedLeaf,
  NotComplementClosed,
  NotATangle,
  BudgetExceeded,
  ParseError,
};

std::string_view to_string(ErrorCode code);

// Single exception type; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tangle_forge
