#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "weylmax/dft.hpp"
#include "weylmax/poly.hpp"

namespace weylmax {

enum class BuildMethod { direct, dft };

/// Entries beyond this are refused outright.
inline constexpr std::uint64_t kWeylMemoryGuard = std::uint64_t{1} << 28;
/// Above this the slab-streaming path is used by `summarize_weyl`.
inline constexpr std::uint64_t kWeylStreamThreshold = std::uint64_t{1} << 24;

/// S(b) = sum_{r in F_q^d} e((P(r) + b.r) / q) for every b, row-major in b.
struct WeylTable {
  std::int64_t q = 0;
  std::size_t d = 0;
  std::vector<cplx> values;
  BuildMethod method = BuildMethod::dft;

  std::size_t size() const noexcept { return values.size(); }
  const cplx& at(std::span<const std::int64_t> b) const;
};

/// P(r) mod q for every r in F_q^d, row-major. Exact integer arithmetic.
std::vector<std::uint32_t> residue_table(const IntPolynomial& p, std::int64_t q);

cplx weyl_sum_direct(const IntPolynomial& p, std::int64_t q, std::span<const std::int64_t> b);

WeylTable weyl_table(const IntPolynomial& p, std::int64_t q,
                     BuildMethod method = BuildMethod::dft,
                     DftEngine engine = DftEngine::automatic);

/// |sum_b |S(b)|^2 - q^{2d}| / q^{2d}.
double parseval_defect(const WeylTable& t);

struct DeligneReport {
  double max_modulus = 0;
  double bound = 0;   ///< (k - 1) q^{d/2}
  bool ok = false;
  /// (k - 1)^d q^{d/2}: the bound for d variables without the separability
  /// assumption; reported for diagnosis only.
  double bound_general = 0;
  bool ok_general = false;
};

DeligneReport deligne_check(const WeylTable& t, unsigned k);
DeligneReport deligne_report(double max_modulus, std::int64_t q, std::size_t d, unsigned k);

struct GoodSet {
  std::int64_t q = 0;
  std::size_t d = 0;
  double c = 0;
  std::vector<std::uint64_t> members;  ///< ascending flat indices of b
  std::uint64_t total = 0;             ///< q^d
  double density = 0;

  bool contains(std::uint64_t flat) const;
};

/// (1 - c^2) / (k - 1)^2.
double guaranteed_density(double c, unsigned k);

/// G(q) = { b : |S(b)| >= c q^{d/2} }. When the table passes the Deligne
/// check, a density below `guaranteed_density` raises an invariant error.
GoodSet good_set(const WeylTable& t, double c, unsigned k);

/// Calls `visit(b_1, slab)` for each b_1 in [0, q), where slab holds S(b_1, .)
/// over F_q^{d-1}. Memory is O(q^{d-1}).
void stream_weyl_slabs(const IntPolynomial& p, std::int64_t q,
                       const std::function<void(std::int64_t, std::span<const cplx>)>& visit,
                       DftEngine engine = DftEngine::automatic);

/// What the divergence-set builder needs from one prime.
struct WeylSummary {
  std::int64_t q = 0;
  std::size_t d = 0;
  unsigned k = 0;
  DeligneReport deligne;
  double parseval_defect = 0;
  GoodSet good;
  bool streamed = false;
};

/// Full table for q^d <= kWeylStreamThreshold, slab streaming above it.
WeylSummary summarize_weyl(const IntPolynomial& p, std::int64_t q, double c,
                           bool force_stream = false);

}  // namespace weylmax
