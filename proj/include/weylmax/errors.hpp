#pragma once

#include <stdexcept>
#include <string>

namespace weylmax {

enum class ErrorKind {
  input,
  parse,
  precondition,
  config,
  unsupported,
  insufficient_data,
  resource,
  invariant,
};

/// Single exception type for the library; `kind()` drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

const char* to_string(ErrorKind kind);

/// 2 for bad input, 3 for resource guards, 4 for runtime invariant violations.
int exit_code(ErrorKind kind);

}  // namespace weylmax
