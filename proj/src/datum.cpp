#include "weylmax/datum.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "weylmax/errors.hpp"
#include "weylmax/numtheory.hpp"
#include "weylmax/parallel.hpp"
#include "weylmax/weyl.hpp"

namespace weylmax {

namespace {

constexpr std::uint64_t kChunk = std::uint64_t{1} << 15;

double smoothstep(double t) {
  auto g = [](double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; };
  const double a = g(t);
  const double b = g(1.0 - t);
  return a / (a + b);
}

cplx unit(double turns) {
  const double angle = 2.0 * std::numbers::pi * turns;
  return {std::cos(angle), std::sin(angle)};
}

// Walks the flattened box range [begin, end) row by row: visit(j, len) gets
// the axis offsets of the first point of a run along the last axis and the
// run length.
template <class Visit>
void for_each_run(const Datum& f, std::uint64_t begin, std::uint64_t end, Visit&& visit) {
  const std::size_t d = f.d();
  const std::uint64_t L = f.axis_length();
  std::vector<std::int64_t> j(d);
  std::uint64_t t = begin;
  while (t < end) {
    unflatten(t, L, j);
    const std::uint64_t len = std::min<std::uint64_t>(L - static_cast<std::uint64_t>(j[d - 1]), end - t);
    visit(std::span<const std::int64_t>(j), len);
    t += len;
  }
}

// Chunked, compensated sum of term(n) over the box in flattened order.
template <class Term>
double box_sum(const Datum& f, Term&& term) {
  const std::uint64_t chunks = (f.box_size() + kChunk - 1) / kChunk;
  CompensatedSum total;
  std::vector<std::int64_t> n(f.d());
  for (std::uint64_t c = 0; c < chunks; ++c) {
    CompensatedSum part;
    for_each_run(f, c * kChunk, std::min(f.box_size(), (c + 1) * kChunk),
                 [&](std::span<const std::int64_t> j, std::uint64_t len) {
                   for (std::size_t i = 0; i < n.size(); ++i) n[i] = f.lo() + j[i];
                   for (std::uint64_t s = 0; s < len; ++s, ++n.back()) part.add(term(n));
                 });
    total.add(part.value());
  }
  return total.value();
}

}  // namespace

double bump(double x) {
  if (!(x > 0.25 && x < 2.0)) return 0.0;
  if (x < 0.5) return smoothstep(4.0 * (x - 0.25));
  if (x <= 1.0) return 1.0;
  return smoothstep(2.0 - x);
}

Datum::Datum(std::int64_t N, std::size_t d) : N_(N), d_(d) {
  require(N >= 8, ErrorKind::input, "datum scale N must be >= 8");
  require(d >= 1, ErrorKind::input, "datum dimension must be >= 1");
  lo_ = N / 4 + 1;  // n > N/4
  hi_ = 2 * N - 1;  // n < 2N
  const auto L = static_cast<std::uint64_t>(hi_ - lo_ + 1);
  box_size_ = grid_size(L, d, kDatumBoxGuard);
  require(box_size_ != 0, ErrorKind::resource,
          "datum support box exceeds 2^28 points (N = " + std::to_string(N) +
              ", d = " + std::to_string(d) + ")");
  profile_.resize(L);
  for (std::uint64_t j = 0; j < L; ++j)
    profile_[j] = bump(static_cast<double>(lo_ + static_cast<std::int64_t>(j)) / static_cast<double>(N));
}

double Datum::coefficient(std::span<const std::int64_t> n) const {
  require(n.size() == d_, ErrorKind::input, "frequency has wrong dimension");
  double v = 1.0;
  for (std::int64_t ni : n) {
    if (ni < lo_ || ni > hi_) return 0.0;
    v *= profile_[static_cast<std::size_t>(ni - lo_)];
  }
  return v;
}

Datum datum_coefficients(std::int64_t N, std::size_t d) { return Datum(N, d); }

double sobolev_norm_sq(const Datum& f, double s) {
  return box_sum(f, [&](std::span<const std::int64_t> n) {
    double mag2 = 0.0;
    for (std::int64_t ni : n) mag2 += static_cast<double>(ni) * static_cast<double>(ni);
    const double phi = f.coefficient(n);
    const double weight = s == 0.0 ? 1.0 : std::pow(1.0 + mag2, s);
    return weight * phi * phi;
  });
}

double coefficient_l1(const Datum& f) {
  return box_sum(f, [&](std::span<const std::int64_t> n) { return f.coefficient(n); });
}

bool within_perturbation_budget(const RationalPoint& pt, std::int64_t N, double rho) {
  const double budget = rho / (static_cast<double>(pt.delta.size()) * static_cast<double>(N));
  for (double x : pt.delta)
    if (!(std::abs(x) <= budget)) return false;
  return true;
}

namespace {

struct EvalScratch {
  std::vector<std::vector<std::uint64_t>> cell, lin;
  std::vector<std::vector<cplx>> shift;
  std::vector<std::uint32_t> residues;

  void resize(std::size_t d, std::uint64_t L) {
    cell.resize(d);
    lin.resize(d);
    shift.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
      cell[i].resize(L);
      lin[i].resize(L);
      shift[i].assign(L, cplx(1.0, 0.0));
    }
  }
};

}  // namespace

cplx evaluate_solution(const IntPolynomial& p, const Datum& f, const RationalPoint& pt,
                       EvalOptions opts) {
  const std::size_t d = f.d();
  require(p.dim() == d, ErrorKind::input, "polynomial and datum dimensions differ");
  require(pt.b.size() == d, ErrorKind::input, "point numerator has wrong dimension");
  require(pt.delta.empty() || pt.delta.size() == d, ErrorKind::input,
          "perturbation has wrong dimension");
  require(pt.q >= 2, ErrorKind::input, "denominator q must be >= 2");

  const auto q = static_cast<std::uint64_t>(pt.q);
  const RootTable roots(q);
  // P(n) mod q depends on n mod q only. Buffers are reused across calls
  // since a scan evaluates thousands of points per thread.
  const std::uint64_t cells = grid_size(q, d, kWeylMemoryGuard);
  require(cells != 0, ErrorKind::resource, "q^d exceeds the residue table guard");
  thread_local EvalScratch scratch;
  scratch.residues.resize(cells);
  auto& residues = scratch.residues;
  {
    std::vector<std::int64_t> r(d, 0);
    for (std::uint64_t i = 0; i < cells; ++i) {
      unflatten(i, q, r);
      residues[i] = static_cast<std::uint32_t>(eval_poly_mod(p, r, q));
    }
  }

  const std::uint64_t L = f.axis_length();
  const auto prof = f.profile();
  std::vector<std::uint64_t> stride(d, 1);
  for (std::size_t i = d - 1; i-- > 0;) stride[i] = stride[i + 1] * q;
  // Per-axis tables: residue-cell offset, (b_i n_i) mod q, e(delta_i n_i).
  scratch.resize(d, L);
  auto& cell = scratch.cell;
  auto& lin = scratch.lin;
  auto& shift = scratch.shift;
  bool perturbed = false;
  for (std::size_t i = 0; i < d; ++i) {
    const std::uint64_t bi = reduce_mod(pt.b[i], q);
    const double di = pt.delta.empty() ? 0.0 : pt.delta[i];
    perturbed = perturbed || di != 0.0;
    std::uint64_t nr = reduce_mod(f.lo(), q);
    std::uint64_t li = mul_mod(bi, nr, q);
    for (std::uint64_t j = 0; j < L; ++j) {
      cell[i][j] = nr * stride[i];
      lin[i][j] = li;
      if (++nr == q) nr = 0;
      li += bi;
      if (li >= q) li -= q;
    }
    if (di == 0.0) continue;
    // e(delta n) = e(delta (lo + hi B)) e(delta lo_j): 2 sqrt(L) evaluations.
    const std::uint64_t B = 256;
    std::vector<cplx> coarse((L + B - 1) / B), fine(B);
    for (std::uint64_t h = 0; h < coarse.size(); ++h)
      coarse[h] = unit(di * static_cast<double>(f.lo() + static_cast<std::int64_t>(h * B)));
    for (std::uint64_t r = 0; r < B; ++r) fine[r] = unit(di * static_cast<double>(r));
    for (std::uint64_t j = 0; j < L; ++j) shift[i][j] = coarse[j / B] * fine[j % B];
  }

  const std::uint64_t chunks = (f.box_size() + kChunk - 1) / kChunk;
  std::vector<cplx> partial(chunks);
  parallel_chunks(chunks, opts.threads, [&](std::uint64_t c) {
    CompensatedComplexSum acc;
    for_each_run(f, c * kChunk, std::min(f.box_size(), (c + 1) * kChunk),
                 [&](std::span<const std::int64_t> j, std::uint64_t len) {
                   double w_out = 1.0;
                   std::uint64_t cell_out = 0, lin_out = 0;
                   cplx shift_out(1.0, 0.0);
                   for (std::size_t i = 0; i + 1 < d; ++i) {
                     w_out *= prof[j[i]];
                     cell_out += cell[i][j[i]];
                     lin_out += lin[i][j[i]];
                     if (perturbed) shift_out *= shift[i][j[i]];
                   }
                   if (w_out == 0.0) return;
                   lin_out %= q;
                   const std::size_t last = d - 1;
                   const auto j0 = static_cast<std::uint64_t>(j[last]);
                   for (std::uint64_t jl = j0; jl < j0 + len; ++jl) {
                     const double w = w_out * prof[jl];
                     if (w == 0.0) continue;
                     std::uint64_t phase = residues[cell_out + cell[last][jl]] + lin_out + lin[last][jl];
                     if (phase >= q) phase -= q;
                     if (phase >= q) phase -= q;
                     cplx z = roots[phase] * w;
                     if (perturbed) z *= shift_out * shift[last][jl];
                     acc.add(z);
                   }
                 });
    partial[c] = acc.value();
  });
  CompensatedComplexSum total;
  for (const cplx& z : partial) total.add(z);
  return total.value();
}

cplx evaluate_initial(const Datum& f, std::span<const double> x, EvalOptions opts) {
  require(x.size() == f.d(), ErrorKind::input, "point has wrong dimension");
  const std::uint64_t chunks = (f.box_size() + kChunk - 1) / kChunk;
  std::vector<cplx> partial(chunks);
  parallel_chunks(chunks, opts.threads, [&](std::uint64_t c) {
    CompensatedComplexSum acc;
    std::vector<std::int64_t> n(f.d());
    for_each_run(f, c * kChunk, std::min(f.box_size(), (c + 1) * kChunk),
                 [&](std::span<const std::int64_t> j, std::uint64_t len) {
                   for (std::size_t i = 0; i < n.size(); ++i) n[i] = f.lo() + j[i];
                   for (std::uint64_t s = 0; s < len; ++s, ++n.back()) {
                     const double w = f.coefficient(n);
                     if (w == 0.0) continue;
                     double turns = 0.0;
                     for (std::size_t i = 0; i < n.size(); ++i) turns += x[i] * static_cast<double>(n[i]);
                     acc.add(w * unit(turns - std::floor(turns)));
                   }
                 });
    partial[c] = acc.value();
  });
  CompensatedComplexSum total;
  for (const cplx& z : partial) total.add(z);
  return total.value();
}

cplx evaluate_solution_unsafe_float(const IntPolynomial& p, const Datum& f,
                                    std::span<const double> x, double t) {
  require(p.dim() == f.d() && x.size() == f.d(), ErrorKind::input, "dimension mismatch");
  CompensatedComplexSum acc;
  std::vector<std::int64_t> n(f.d());
  for_each_run(f, 0, f.box_size(), [&](std::span<const std::int64_t> j, std::uint64_t len) {
    for (std::size_t i = 0; i < n.size(); ++i) n[i] = f.lo() + j[i];
    for (std::uint64_t s = 0; s < len; ++s, ++n.back()) {
      const double w = f.coefficient(n);
      if (w == 0.0) continue;
      double pn = 0.0;
      for (const auto& [e, c] : p.terms()) {
        double term = static_cast<double>(c);
        for (std::size_t i = 0; i < e.size(); ++i) term *= std::pow(static_cast<double>(n[i]), e[i]);
        pn += term;
      }
      double turns = pn * t;
      for (std::size_t i = 0; i < n.size(); ++i) turns += x[i] * static_cast<double>(n[i]);
      acc.add(w * unit(turns - std::floor(turns)));
    }
  });
  return acc.value();
}

}  // namespace weylmax
