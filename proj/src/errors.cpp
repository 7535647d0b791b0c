#include "weylmax/errors.hpp"

namespace weylmax {

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::input: return "input error";
    case ErrorKind::parse: return "parse error";
    case ErrorKind::precondition: return "precondition error";
    case ErrorKind::config: return "configuration error";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::insufficient_data: return "insufficient data";
    case ErrorKind::resource: return "resource guard";
    case ErrorKind::invariant: return "invariant violation";
  }
  return "error";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::resource: return 3;
    case ErrorKind::invariant: return 4;
    default: return 2;
  }
}

}  // namespace weylmax
