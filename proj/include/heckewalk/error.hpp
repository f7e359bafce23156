#pragma once

#include <stdexcept>
#include <string>

namespace hw {

// Status codes shared by the C++ core and the C API. Values are part of the
// C ABI (see heckewalk.h) and must not be renumbered.
enum class ErrorCode : int {
  kOk = 0,
  kInvalidArgument = 1,
  kDomain = 2,
  kTooLarge = 3,
  kNotStochastic = 4,
  kBoundaryContact = 5,
  kPlateauNotReached = 6,
  kExcessiveDiscards = 7,
  kIo = 8,
  kInternal = 99,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, const std::string& what,
                    ErrorCode code = ErrorCode::kInvalidArgument) {
  if (!cond) throw Error(code, what);
}

}  // namespace hw
