#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "weylmax/dft.hpp"
#include "weylmax/poly.hpp"

namespace weylmax {

/// Fixed smooth profile: 0 outside (1/4, 2), 1 on [1/2, 1], and the
/// exp(-1/t) smoothstep on the two transitions.
double bump(double x);

/// Support boxes beyond this many lattice points are refused.
inline constexpr std::uint64_t kDatumBoxGuard = std::uint64_t{1} << 28;

/// Coefficients phi(n/N) = prod_i bump(n_i/N) of f_N on the box
/// (N/4, 2N)^d. The product structure is kept: only the per-axis profile is
/// stored.
class Datum {
 public:
  Datum(std::int64_t N, std::size_t d);

  std::int64_t N() const noexcept { return N_; }
  std::size_t d() const noexcept { return d_; }
  /// Inclusive per-axis index range of the box.
  std::int64_t lo() const noexcept { return lo_; }
  std::int64_t hi() const noexcept { return hi_; }
  std::uint64_t axis_length() const noexcept { return profile_.size(); }
  std::uint64_t box_size() const noexcept { return box_size_; }
  /// bump(n/N) for n = lo .. hi.
  std::span<const double> profile() const noexcept { return profile_; }

  double coefficient(std::span<const std::int64_t> n) const;

 private:
  std::int64_t N_;
  std::size_t d_;
  std::int64_t lo_, hi_;
  std::uint64_t box_size_;
  std::vector<double> profile_;
};

/// Requires N >= 8.
Datum datum_coefficients(std::int64_t N, std::size_t d);

/// sum_n (1 + |n|^2)^s phi(n/N)^2, compensated, fixed order.
double sobolev_norm_sq(const Datum& f, double s);
/// sum_n |phi(n/N)|; an upper bound for |e^{itP(D)} f_N| everywhere.
double coefficient_l1(const Datum& f);

/// x = b/q + delta, t = 1/q.
struct RationalPoint {
  std::vector<std::int64_t> b;
  std::int64_t q = 0;
  std::vector<double> delta;
};

/// True when |delta|_inf <= rho / (d N).
bool within_perturbation_budget(const RationalPoint& pt, std::int64_t N, double rho);

struct EvalOptions {
  unsigned threads = 1;
};

/// e^{itP(D)} f_N(x) at x = b/q + delta, t = 1/q. Each term's phase is
/// ((b.n + P(n)) mod q)/q + delta.n with the modular part computed in
/// integers before touching the unit circle. Summation is chunked and
/// compensated; the result does not depend on `threads`.
cplx evaluate_solution(const IntPolynomial& p, const Datum& f, const RationalPoint& pt,
                       EvalOptions opts = {});

/// f_N(x) = sum phi(n/N) e(x.n), i.e. the solution at t = 0.
cplx evaluate_initial(const Datum& f, std::span<const double> x, EvalOptions opts = {});

/// Floating reduction of n.x + P(n) t mod 1. Loses all precision once
/// P(n) t reaches 2^53; kept for demonstration only.
cplx evaluate_solution_unsafe_float(const IntPolynomial& p, const Datum& f,
                                    std::span<const double> x, double t);

}  // namespace weylmax
