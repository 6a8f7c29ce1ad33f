#pragma once

#include <stdexcept>
#include <string>

namespace fracheat {

enum class ErrorCode {
  invalid_argument = 1,
  domain_error = 2,
  inadmissible_time = 3,
  quadrature_failure = 4,
  degenerate = 5,
  non_finite = 6,
  io_error = 7,
  internal = 8,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

inline void require(bool cond, const char* what,
                    ErrorCode code = ErrorCode::invalid_argument) {
  if (!cond) fail(code, what);
}
inline void require(bool cond, const std::string& what,
                    ErrorCode code = ErrorCode::invalid_argument) {
  if (!cond) fail(code, what);
}

}  // namespace fracheat
