#include "weylmax/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "weylmax/errors.hpp"
#include "weylmax/numtheory.hpp"
#include "weylmax/parallel.hpp"

namespace weylmax {

namespace {

void require_prime(std::int64_t q) {
  require(q >= 2 && is_prime(static_cast<std::uint64_t>(q)), ErrorKind::input,
          std::to_string(q) + " is not prime");
  require(q < (std::int64_t{1} << 31), ErrorKind::input, "modulus too large");
}

std::uint64_t checked_grid(std::int64_t q, std::size_t d) {
  const std::uint64_t n = grid_size(static_cast<std::uint64_t>(q), d, kWeylMemoryGuard);
  require(n != 0, ErrorKind::resource,
          "q^d exceeds the Weyl table guard of 2^28 entries (q = " + std::to_string(q) +
              ", d = " + std::to_string(d) + ")");
  return n;
}

// Advances r through F_q^d in row-major order.
bool next_point(std::vector<std::int64_t>& r, std::int64_t q) {
  for (std::size_t i = r.size(); i-- > 0;) {
    if (++r[i] < q) return true;
    r[i] = 0;
  }
  return false;
}

}  // namespace

const cplx& WeylTable::at(std::span<const std::int64_t> b) const {
  require(b.size() == d, ErrorKind::input, "residue vector has wrong dimension");
  std::vector<std::int64_t> r(d);
  for (std::size_t i = 0; i < d; ++i)
    r[i] = static_cast<std::int64_t>(reduce_mod(b[i], static_cast<std::uint64_t>(q)));
  return values[flat_index(r, static_cast<std::uint64_t>(q))];
}

std::vector<std::uint32_t> residue_table(const IntPolynomial& p, std::int64_t q) {
  const std::uint64_t n = checked_grid(q, p.dim());
  std::vector<std::uint32_t> out(n);
  std::vector<std::int64_t> r(p.dim(), 0);
  for (std::uint64_t i = 0; i < n; ++i) {
    out[i] = static_cast<std::uint32_t>(eval_poly_mod(p, r, static_cast<std::uint64_t>(q)));
    next_point(r, q);
  }
  return out;
}

cplx weyl_sum_direct(const IntPolynomial& p, std::int64_t q, std::span<const std::int64_t> b) {
  require_prime(q);
  require(b.size() == p.dim(), ErrorKind::input, "residue vector has wrong dimension");
  checked_grid(q, p.dim());
  const auto uq = static_cast<std::uint64_t>(q);
  const RootTable roots(uq);
  std::vector<std::uint64_t> bred(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) bred[i] = reduce_mod(b[i], uq);

  std::vector<std::int64_t> r(p.dim(), 0);
  CompensatedSum re, im;
  do {
    std::uint64_t phase = eval_poly_mod(p, r, uq);
    for (std::size_t i = 0; i < r.size(); ++i)
      phase = (phase + mul_mod(bred[i], static_cast<std::uint64_t>(r[i]), uq)) % uq;
    re.add(roots[phase].real());
    im.add(roots[phase].imag());
  } while (next_point(r, q));
  return {re.value(), im.value()};
}

WeylTable weyl_table(const IntPolynomial& p, std::int64_t q, BuildMethod method, DftEngine engine) {
  require_prime(q);
  const std::size_t d = p.dim();
  const std::uint64_t n = checked_grid(q, d);
  const auto uq = static_cast<std::uint64_t>(q);
  const RootTable roots(uq);
  const auto residues = residue_table(p, q);

  WeylTable t{q, d, std::vector<cplx>(n), method};
  if (method == BuildMethod::dft) {
    for (std::uint64_t i = 0; i < n; ++i) t.values[i] = roots[residues[i]];
    dft_axes(t.values, uq, d, +1, engine);
    return t;
  }

  std::vector<std::int64_t> b(d, 0), r(d);
  for (std::uint64_t bi = 0; bi < n; ++bi) {
    CompensatedSum re, im;
    std::fill(r.begin(), r.end(), 0);
    for (std::uint64_t ri = 0; ri < n; ++ri) {
      std::uint64_t phase = residues[ri];
      for (std::size_t i = 0; i < d; ++i)
        phase += static_cast<std::uint64_t>(b[i]) * static_cast<std::uint64_t>(r[i]) % uq;
      phase %= uq;
      re.add(roots[phase].real());
      im.add(roots[phase].imag());
      next_point(r, q);
    }
    t.values[bi] = {re.value(), im.value()};
    next_point(b, q);
  }
  return t;
}

double parseval_defect(const WeylTable& t) {
  CompensatedSum total;
  for (const cplx& s : t.values) total.add(std::norm(s));
  const double expected = std::pow(static_cast<double>(t.q), 2.0 * static_cast<double>(t.d));
  return std::abs(total.value() - expected) / expected;
}

DeligneReport deligne_report(double max_modulus, std::int64_t q, std::size_t d, unsigned k) {
  const double scale = std::pow(static_cast<double>(q), 0.5 * static_cast<double>(d));
  // Equality is attained for k = 2; allow the table's roundoff.
  const double slack = 1e-9 * scale;
  DeligneReport r;
  r.max_modulus = max_modulus;
  r.bound = (static_cast<double>(k) - 1.0) * scale;
  r.ok = max_modulus <= r.bound + slack;
  r.bound_general = std::pow(static_cast<double>(k) - 1.0, static_cast<double>(d)) * scale;
  r.ok_general = max_modulus <= r.bound_general + slack;
  return r;
}

DeligneReport deligne_check(const WeylTable& t, unsigned k) {
  double max_mod = 0;
  for (const cplx& s : t.values) max_mod = std::max(max_mod, std::abs(s));
  return deligne_report(max_mod, t.q, t.d, k);
}

bool GoodSet::contains(std::uint64_t flat) const {
  return std::binary_search(members.begin(), members.end(), flat);
}

double guaranteed_density(double c, unsigned k) {
  require(k >= 2, ErrorKind::input, "good-set density needs degree >= 2");
  const double km1 = static_cast<double>(k) - 1.0;
  return (1.0 - c * c) / (km1 * km1);
}

namespace {

void check_threshold(double c) {
  require(c > 0.0 && c < 1.0, ErrorKind::input, "good-set threshold c must lie in (0, 1)");
}

void finish_good_set(GoodSet& g, const DeligneReport& deligne, unsigned k) {
  g.density = static_cast<double>(g.members.size()) / static_cast<double>(g.total);
  if (deligne.ok && g.density < guaranteed_density(g.c, k))
    fail(ErrorKind::invariant, "good-set density " + std::to_string(g.density) +
                                   " below the guaranteed " +
                                   std::to_string(guaranteed_density(g.c, k)) +
                                   " for q = " + std::to_string(g.q));
}

}  // namespace

GoodSet good_set(const WeylTable& t, double c, unsigned k) {
  check_threshold(c);
  GoodSet g{t.q, t.d, c, {}, t.values.size(), 0.0};
  const double threshold = c * std::pow(static_cast<double>(t.q), 0.5 * static_cast<double>(t.d));
  for (std::uint64_t i = 0; i < t.values.size(); ++i)
    if (std::abs(t.values[i]) >= threshold) g.members.push_back(i);
  finish_good_set(g, deligne_check(t, k), k);
  return g;
}

void stream_weyl_slabs(const IntPolynomial& p, std::int64_t q,
                       const std::function<void(std::int64_t, std::span<const cplx>)>& visit,
                       DftEngine engine) {
  require_prime(q);
  const std::size_t d = p.dim();
  const auto uq = static_cast<std::uint64_t>(q);
  const RootTable roots(uq);
  // Residues are kept as 32-bit integers; S(b) itself exists one slab at a time.
  const auto residues = residue_table(p, q);
  const std::uint64_t slab = residues.size() / uq;
  std::vector<cplx> values(slab);
  for (std::int64_t b1 = 0; b1 < q; ++b1) {
    // Direct transform along axis 1 for this b1, then the remaining axes.
    std::fill(values.begin(), values.end(), cplx(0.0, 0.0));
    std::uint64_t shift = 0;  // b1 r1 mod q
    for (std::uint64_t r1 = 0; r1 < uq; ++r1) {
      const std::uint32_t* row = residues.data() + r1 * slab;
      for (std::uint64_t j = 0; j < slab; ++j) {
        std::uint64_t phase = row[j] + shift;
        if (phase >= uq) phase -= uq;
        values[j] += roots[phase];
      }
      shift += static_cast<std::uint64_t>(b1);
      if (shift >= uq) shift -= uq;
    }
    if (d > 1) dft_axes(values, uq, d - 1, +1, engine);
    visit(b1, values);
  }
}

WeylSummary summarize_weyl(const IntPolynomial& p, std::int64_t q, double c, bool force_stream) {
  check_threshold(c);
  const unsigned k = p.degree();
  const std::size_t d = p.dim();
  const std::uint64_t n = checked_grid(q, d);
  WeylSummary out;
  out.q = q;
  out.d = d;
  out.k = k;
  if (n <= kWeylStreamThreshold && !force_stream) {
    const WeylTable t = weyl_table(p, q);
    out.parseval_defect = parseval_defect(t);
    out.deligne = deligne_check(t, k);
    out.good = good_set(t, c, k);
    return out;
  }
  out.streamed = true;
  out.good = GoodSet{q, d, c, {}, n, 0.0};
  const double threshold = c * std::pow(static_cast<double>(q), 0.5 * static_cast<double>(d));
  double max_mod = 0;
  CompensatedSum energy;
  const std::uint64_t slab = n / static_cast<std::uint64_t>(q);
  stream_weyl_slabs(p, q, [&](std::int64_t b1, std::span<const cplx> values) {
    for (std::uint64_t j = 0; j < values.size(); ++j) {
      const double m = std::abs(values[j]);
      max_mod = std::max(max_mod, m);
      energy.add(m * m);
      if (m >= threshold) out.good.members.push_back(static_cast<std::uint64_t>(b1) * slab + j);
    }
  });
  const double expected = std::pow(static_cast<double>(q), 2.0 * static_cast<double>(d));
  out.parseval_defect = std::abs(energy.value() - expected) / expected;
  out.deligne = deligne_report(max_mod, q, d, k);
  finish_good_set(out.good, out.deligne, k);
  return out;
}

}  // namespace weylmax
