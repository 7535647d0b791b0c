#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "weylmax/numtheory.hpp"
#include "weylmax/poly.hpp"
#include "weylmax/weyl.hpp"

namespace weylmax {

/// Ball B(b/q, rho/N) on the torus.
struct Ball {
  std::int64_t q = 0;
  std::vector<std::int64_t> b;
};

struct PrimeProvenance {
  std::int64_t q = 0;
  std::uint64_t good_count = 0;
  double density = 0;
  DeligneReport deligne;
  double parseval_defect = 0;
};

struct DivergenceSet {
  std::int64_t N = 0;
  std::size_t d = 0;
  std::int64_t Q = 0;
  double rho = 0;
  double c = 0;
  unsigned k = 0;
  std::vector<Ball> balls;                 ///< grouped by q, ascending
  std::vector<PrimeProvenance> per_prime;  ///< one entry per admissible q
  std::vector<std::int64_t> dropped;       ///< band primes dividing k

  double radius() const { return rho / static_cast<double>(N); }
  std::uint64_t J() const { return balls.size(); }
};

/// Largest Q with Q^{d+1} <= N^d, i.e. floor(N^{d/(d+1)}) computed exactly.
std::int64_t coupling_Q(std::int64_t N, std::size_t d);

struct BuildOptions {
  unsigned threads = 1;
};

/// Balls over q in primes [Q, 2Q) with q not dividing deg P, b in G(q).
DivergenceSet build_divergence_set(const IntPolynomial& p, std::int64_t N, double c, double rho,
                                   BuildOptions opts = {});

/// Assembles a set from an explicit ball list (e.g. read back from CSV).
DivergenceSet divergence_set_from_balls(std::int64_t N, std::size_t d, double rho,
                                        std::vector<Ball> balls);

/// Per-coordinate candidates (x, y), x in [0, q), y in [0, q'), whose
/// centers x/q and y/q' are within `reach` on the circle. Uses the lattice
/// line walk, O(1 + reach q q').
std::vector<std::pair<std::int64_t, std::int64_t>> circle_close_pairs(std::int64_t q, std::int64_t q2,
                                                                      double reach);

/// Unordered pairs of balls, self-pairs included, whose centers are within
/// 2 rho / N in the torus sup-norm.
std::uint64_t overlap_pair_count(const DivergenceSet& x);

struct MeasureMethod {
  enum class Kind { exact, montecarlo } kind = Kind::exact;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  unsigned threads = 1;

  static MeasureMethod exact() { return {}; }
  static MeasureMethod montecarlo(std::uint64_t samples, std::uint64_t seed, unsigned threads = 1) {
    return {Kind::montecarlo, samples, seed, threads};
  }
};

struct MeasureResult {
  std::string method;
  double estimate = 0;
  double error = 0;        ///< 0 for exact; binomial standard error otherwise
  double upper_bound = 0;  ///< J (2 rho / N)^d
  double lower_bound = 0;  ///< Cauchy-Schwarz bound from the overlap count
  std::uint64_t J = 0;
  std::uint64_t overlap_pairs = 0;
  std::uint64_t samples = 0;
  bool low_sample_warning = false;
};

inline constexpr std::uint64_t kMinMonteCarloSamples = 10000;

MeasureResult measure(const DivergenceSet& x, MeasureMethod method = MeasureMethod::exact());

/// Lebesgue measure of a union of arcs (center, half-width) on R/Z.
double circle_union_measure(std::vector<std::pair<double, double>> arcs);

}  // namespace weylmax
