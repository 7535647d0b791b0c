#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace weylmax {

/// Resolved settings of one invocation; embedded in every output file header.
struct RunConfig {
  std::string command;
  std::string poly;  ///< inline JSON or a path; resolved to canonical JSON
  std::size_t d = 0;
  unsigned k = 0;
  double s = 0;
  std::int64_t N = 0;
  std::vector<std::int64_t> ladder;
  std::int64_t q = 0;
  std::vector<std::int64_t> b;
  std::vector<double> delta;
  double c = 0.5;
  double rho = 1.0 / 32.0;
  std::uint64_t seed = 42;
  std::uint64_t sample_budget = 8192;
  std::uint64_t mc_samples = 200000;
  std::string method;
  std::string in;
  std::string out;
  unsigned threads = 1;
};

nlohmann::ordered_json to_json(const RunConfig& cfg);

/// Parses a ladder such as "1024,2048,...,32768". "..." continues the
/// geometric progression of the two preceding entries up to the next one.
std::vector<std::int64_t> parse_ladder(const std::string& text);

/// Runs one subcommand; `args` excludes the program name. Returns the exit
/// code: 0 success, 2 bad input or usage, 3 resource guard, 4 invariant.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace weylmax
