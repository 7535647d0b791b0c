#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "weylmax/datum.hpp"
#include "weylmax/weyl.hpp"

namespace weylmax {

/// A function F_q^d -> C, row-major.
struct ResidueGrid {
  std::int64_t q = 0;
  std::size_t d = 0;
  std::vector<cplx> values;
};

/// Z(r) = sum_m zeta(m q + r), zeta(n) = phi(n/N) e(delta.n).
struct FoldedZ {
  ResidueGrid grid;
  std::int64_t N = 0;
  std::vector<double> delta;
};

/// Zhat(l) = q^{-d} sum_r Z(r) e(-r.l / q).
struct SpectralZ {
  ResidueGrid hat;
};

/// Requires q < N/4. Phases e(delta.n) are attached before folding.
FoldedZ fold(const Datum& f, std::int64_t q, std::span<const double> delta);

SpectralZ spectrum(const ResidueGrid& z);
inline SpectralZ spectrum(const FoldedZ& z) { return spectrum(z.grid); }

/// Z(r) = sum_l Zhat(l) e(r.l / q).
ResidueGrid invert(const SpectralZ& s);

/// max_r |Z(r) - invert(spectrum(Z))(r)| / max_r |Z(r)|.
double inversion_defect(const ResidueGrid& z);

/// sum_r Z(r) e((b.r + P(r)) / q): the solution at (b/q + delta, 1/q)
/// computed through the fold.
cplx fold_and_sum(const IntPolynomial& p, const FoldedZ& z, std::span<const std::int64_t> b);

/// q^{-d} sum_n phi(n/N) e(delta.n), summed directly over the datum box.
cplx zhat_zero(const Datum& f, std::int64_t q, std::span<const double> delta);

struct MainError {
  cplx main;    ///< M = Zhat(0) S(b)
  cplx error;   ///< E = direct - M
  cplx zhat0;
  cplx direct;  ///< evaluate_solution at the point

  double ratio() const;  ///< |E| / |M|
};

/// Splits the solution at (b/q + delta, 1/q) into main and error terms.
/// `t` must be built for the same q and dimension.
MainError main_error_split(const IntPolynomial& p, const Datum& f, const RationalPoint& pt,
                           const WeylTable& t, EvalOptions opts = {});

/// E written spectrally: sum_{l != 0} Zhat(l) S(b + l). O(q^d) per point.
cplx error_term_spectral(const SpectralZ& s, const WeylTable& t, std::span<const std::int64_t> b);

/// Cyclic second differences. With `axis`, only Delta_axis; otherwise the
/// full Laplacian sum_j Delta_j.
ResidueGrid discrete_laplacian(const ResidueGrid& g, std::optional<std::size_t> axis = std::nullopt);

/// A(l) = -4 sum_j sin^2(pi l_j / q).
double laplacian_symbol(std::span<const std::int64_t> l, std::int64_t q);

/// |sum_r Delta g(r) h(r) - sum_r g(r) Delta h(r)|.
double sbp_check(const ResidueGrid& g, const ResidueGrid& h);

}  // namespace weylmax
