#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace v2x {

enum class ErrorCode {
  InvalidSignal,
  InvalidRelay,
  EmptySelection,
  EmptyPool,
  InfiniteSnr,
  InvalidSnr,
  PreconditionViolated,
  InsufficientRelays,
  InfeasibleBudget,
  InvalidConfig,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so that
// callers (the sweep driver, the CLI) can classify it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace v2x
