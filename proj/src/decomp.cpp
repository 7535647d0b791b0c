#include "weylmax/decomp.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "weylmax/errors.hpp"
#include "weylmax/numtheory.hpp"
#include "weylmax/parallel.hpp"

namespace weylmax {

namespace {

void check_grid(const ResidueGrid& g) {
  require(g.q >= 2 && g.d >= 1, ErrorKind::input, "residue grid needs q >= 2 and d >= 1");
  require(g.values.size() == grid_size(static_cast<std::uint64_t>(g.q), g.d, g.values.size()),
          ErrorKind::input, "residue grid size is not q^d");
}

bool next_point(std::vector<std::int64_t>& r, std::int64_t q) {
  for (std::size_t i = r.size(); i-- > 0;) {
    if (++r[i] < q) return true;
    r[i] = 0;
  }
  return false;
}

cplx unit(double turns) {
  const double angle = 2.0 * std::numbers::pi * turns;
  return {std::cos(angle), std::sin(angle)};
}

// Calls visit(n, zeta(n)) for every box point with non-zero coefficient.
template <class Visit>
void for_each_zeta(const Datum& f, std::span<const double> delta, Visit&& visit) {
  const std::size_t d = f.d();
  const std::uint64_t L = f.axis_length();
  const auto prof = f.profile();
  std::vector<std::vector<cplx>> shift(d, std::vector<cplx>(L, cplx(1.0, 0.0)));
  for (std::size_t i = 0; i < d; ++i)
    if (delta[i] != 0.0)
      for (std::uint64_t j = 0; j < L; ++j)
        shift[i][j] = unit(delta[i] * static_cast<double>(f.lo() + static_cast<std::int64_t>(j)));
  std::vector<std::int64_t> j(d, 0), n(d);
  const auto Ls = static_cast<std::int64_t>(L);
  do {
    double w = 1.0;
    cplx z(1.0, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      w *= prof[j[i]];
      z *= shift[i][j[i]];
      n[i] = f.lo() + j[i];
    }
    if (w != 0.0) visit(std::span<const std::int64_t>(n), w * z);
  } while (next_point(j, Ls));
}

std::vector<double> checked_delta(const Datum& f, std::span<const double> delta) {
  require(delta.empty() || delta.size() == f.d(), ErrorKind::input, "perturbation has wrong dimension");
  std::vector<double> out(f.d(), 0.0);
  for (std::size_t i = 0; i < delta.size(); ++i) out[i] = delta[i];
  return out;
}

}  // namespace

FoldedZ fold(const Datum& f, std::int64_t q, std::span<const double> delta) {
  require(q >= 2, ErrorKind::input, "fold modulus must be >= 2");
  require(4 * q < f.N(), ErrorKind::precondition,
          "fold needs q < N/4 (q = " + std::to_string(q) + ", N = " + std::to_string(f.N()) + ")");
  const auto dl = checked_delta(f, delta);
  const auto uq = static_cast<std::uint64_t>(q);
  const std::uint64_t cells = grid_size(uq, f.d(), kWeylMemoryGuard);
  require(cells != 0, ErrorKind::resource, "q^d exceeds the residue table guard");
  FoldedZ out{{q, f.d(), std::vector<cplx>(cells)}, f.N(), dl};
  std::vector<CompensatedComplexSum> acc(cells);
  std::vector<std::int64_t> r(f.d());
  for_each_zeta(f, dl, [&](std::span<const std::int64_t> n, cplx zeta) {
    for (std::size_t i = 0; i < n.size(); ++i) r[i] = static_cast<std::int64_t>(reduce_mod(n[i], uq));
    acc[flat_index(r, uq)].add(zeta);
  });
  for (std::uint64_t i = 0; i < cells; ++i) out.grid.values[i] = acc[i].value();
  return out;
}

SpectralZ spectrum(const ResidueGrid& z) {
  check_grid(z);
  SpectralZ s{z};
  dft_axes(s.hat.values, static_cast<std::uint64_t>(z.q), z.d, -1);
  const double scale = std::pow(static_cast<double>(z.q), -static_cast<double>(z.d));
  for (cplx& v : s.hat.values) v *= scale;
  return s;
}

ResidueGrid invert(const SpectralZ& s) {
  check_grid(s.hat);
  ResidueGrid z = s.hat;
  dft_axes(z.values, static_cast<std::uint64_t>(z.q), z.d, +1);
  return z;
}

double inversion_defect(const ResidueGrid& z) {
  const ResidueGrid back = invert(spectrum(z));
  double worst = 0, scale = 0;
  for (std::size_t i = 0; i < z.values.size(); ++i) {
    worst = std::max(worst, std::abs(z.values[i] - back.values[i]));
    scale = std::max(scale, std::abs(z.values[i]));
  }
  return scale == 0.0 ? worst : worst / scale;
}

cplx fold_and_sum(const IntPolynomial& p, const FoldedZ& z, std::span<const std::int64_t> b) {
  const auto& g = z.grid;
  require(p.dim() == g.d && b.size() == g.d, ErrorKind::input, "dimension mismatch");
  const auto uq = static_cast<std::uint64_t>(g.q);
  const RootTable roots(uq);
  std::vector<std::uint64_t> bred(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) bred[i] = reduce_mod(b[i], uq);
  CompensatedComplexSum acc;
  std::vector<std::int64_t> r(g.d, 0);
  std::uint64_t idx = 0;
  do {
    std::uint64_t phase = eval_poly_mod(p, r, uq);
    for (std::size_t i = 0; i < r.size(); ++i)
      phase = (phase + mul_mod(bred[i], static_cast<std::uint64_t>(r[i]), uq)) % uq;
    acc.add(g.values[idx++] * roots[phase]);
  } while (next_point(r, g.q));
  return acc.value();
}

cplx zhat_zero(const Datum& f, std::int64_t q, std::span<const double> delta) {
  require(q >= 1, ErrorKind::input, "q must be positive");
  const auto dl = checked_delta(f, delta);
  CompensatedComplexSum acc;
  for_each_zeta(f, dl, [&](std::span<const std::int64_t>, cplx zeta) { acc.add(zeta); });
  return acc.value() * std::pow(static_cast<double>(q), -static_cast<double>(f.d()));
}

double MainError::ratio() const { return std::abs(error) / std::abs(main); }

MainError main_error_split(const IntPolynomial& p, const Datum& f, const RationalPoint& pt,
                           const WeylTable& t, EvalOptions opts) {
  require(pt.q == t.q, ErrorKind::input,
          "point denominator " + std::to_string(pt.q) + " does not match table prime " +
              std::to_string(t.q));
  require(t.d == f.d() && p.dim() == f.d(), ErrorKind::input, "dimension mismatch");
  MainError out;
  out.zhat0 = zhat_zero(f, pt.q, pt.delta);
  out.main = out.zhat0 * t.at(pt.b);
  out.direct = evaluate_solution(p, f, pt, opts);
  out.error = out.direct - out.main;
  return out;
}

cplx error_term_spectral(const SpectralZ& s, const WeylTable& t, std::span<const std::int64_t> b) {
  const auto& hat = s.hat;
  require(hat.q == t.q && hat.d == t.d && b.size() == t.d, ErrorKind::input, "dimension mismatch");
  const auto uq = static_cast<std::uint64_t>(t.q);
  std::vector<std::int64_t> l(t.d, 0), bl(t.d);
  CompensatedComplexSum acc;
  std::uint64_t idx = 0;
  do {
    if (idx != 0) {
      for (std::size_t i = 0; i < l.size(); ++i)
        bl[i] = static_cast<std::int64_t>(reduce_mod(b[i] + l[i], uq));
      acc.add(hat.values[idx] * t.values[flat_index(bl, uq)]);
    }
    ++idx;
  } while (next_point(l, t.q));
  return acc.value();
}

ResidueGrid discrete_laplacian(const ResidueGrid& g, std::optional<std::size_t> axis) {
  check_grid(g);
  require(!axis || *axis < g.d, ErrorKind::input, "Laplacian axis out of range");
  const auto uq = static_cast<std::uint64_t>(g.q);
  ResidueGrid out{g.q, g.d, std::vector<cplx>(g.values.size(), cplx(0.0, 0.0))};
  std::vector<std::int64_t> r(g.d, 0);
  std::uint64_t idx = 0;
  do {
    for (std::size_t j = 0; j < g.d; ++j) {
      if (axis && *axis != j) continue;
      std::uint64_t stride = 1;
      for (std::size_t i = j + 1; i < g.d; ++i) stride *= uq;
      const auto rj = static_cast<std::uint64_t>(r[j]);
      const std::uint64_t up = idx - rj * stride + ((rj + 1) % uq) * stride;
      const std::uint64_t down = idx - rj * stride + ((rj + uq - 1) % uq) * stride;
      out.values[idx] += g.values[up] - 2.0 * g.values[idx] + g.values[down];
    }
    ++idx;
  } while (next_point(r, g.q));
  return out;
}

double laplacian_symbol(std::span<const std::int64_t> l, std::int64_t q) {
  double a = 0.0;
  for (std::int64_t lj : l) {
    const double s = std::sin(std::numbers::pi * static_cast<double>(lj) / static_cast<double>(q));
    a += s * s;
  }
  return -4.0 * a;
}

double sbp_check(const ResidueGrid& g, const ResidueGrid& h) {
  check_grid(g);
  check_grid(h);
  require(g.q == h.q && g.d == h.d, ErrorKind::input, "summation by parts needs matching grids");
  const ResidueGrid lg = discrete_laplacian(g);
  const ResidueGrid lh = discrete_laplacian(h);
  CompensatedComplexSum left, right;
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    left.add(lg.values[i] * h.values[i]);
    right.add(g.values[i] * lh.values[i]);
  }
  return std::abs(left.value() - right.value());
}

}  // namespace weylmax
