#pragma once

#include <string>
#include <vector>

namespace weylmax {

struct SelftestCase {
  std::string name;
  bool ok = false;
  std::string detail;
};

/// Small closed-form examples from every module; each runs in milliseconds.
std::vector<SelftestCase> run_selftest();

}  // namespace weylmax
