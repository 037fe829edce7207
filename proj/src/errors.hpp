#pragma once

#include <stdexcept>
#include <string>

namespace lyapnorm {

// Error categories; the numeric values double as CLI exit codes and as the
// status codes of the C API.
enum class ErrorCode {
  none = 0,
  input = 1,       // malformed input, bad arguments, rejected config
  resonance = 2,   // Melnikov violation, zero or ambiguous small divisor
  validation = 3,  // structural invariant or tolerance check failed
  degenerate = 4,  // degenerate majorant fit
  divergence = 5,  // integration guard tripped
  internal = 9,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace lyapnorm
