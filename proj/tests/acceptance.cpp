// Usage: acceptance [id ...], ids 1-8, 9_10, 11; no id runs everything.
// Prints one PASS/FAIL line per criterion and exits non-zero on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "weylmax/datum.hpp"
#include "weylmax/decomp.hpp"
#include "weylmax/divset.hpp"
#include "weylmax/experiment.hpp"
#include "weylmax/numtheory.hpp"
#include "weylmax/weyl.hpp"

using namespace weylmax;

namespace {

constexpr double kParsevalTol = 1e-9;
constexpr double kGaussTol = 1e-9;
constexpr double kDecompTol = 1e-9;
constexpr double kErrorRatioMax = 0.5;
constexpr double kMeasureBand = 4.0;
constexpr double kSlopeLo = 0.18, kSlopeHi = 0.32, kSlopeGap = 0.1, kFlatTol = 0.08;
constexpr double kSbpTol = 1e-10;
constexpr double kRho = 1.0 / 32.0;

bool report(const std::string& id, bool ok, const std::string& detail) {
  std::printf("criterion %s [PRIMARY] %s  %s\n", id.c_str(), ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  return ok;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

IntPolynomial quartic_plus_linear() {
  IntPolynomial p(1);
  p.add_term({4}, 1);
  p.add_term({1}, 1);
  return p;
}

std::vector<std::int64_t> primes_upto(std::int64_t hi) { return primes_in_band(2, hi + 1).primes; }

bool parseval() {
  const std::vector<IntPolynomial> matrix{family_diagonal(1, 2), family_diagonal(1, 3), quartic_plus_linear(),
                                          family_diagonal(2, 3), family_power_laplacian(2, 2)};
  double worst = 0;
  int cases = 0;
  for (const IntPolynomial& p : matrix)
    for (std::int64_t q : primes_upto(101)) {
      if (p.degree() % q == 0) continue;
      worst = std::max(worst, parseval_defect(weyl_table(p, q)));
      ++cases;
    }
  return report("1", worst < kParsevalTol, fmt("max defect %.3g over %.0f (P, q) cases", worst, cases));
}

bool gauss() {
  double worst = 0;
  int primes = 0;
  for (std::int64_t q : primes_upto(997)) {
    if (q == 2) continue;
    const WeylTable t = weyl_table(family_diagonal(1, 2), q);
    const double root = std::sqrt(static_cast<double>(q));
    for (const cplx& v : t.values) worst = std::max(worst, std::abs(std::abs(v) - root) / root);
    ++primes;
  }
  return report("2", worst < kGaussTol, fmt("max ||S|-sqrt q|/sqrt q = %.3g over %.0f primes", worst, primes));
}

struct DeligneScan {
  double worst_ratio_1 = 0, worst_ratio_2 = 0;  // max|S| / (2 q^{d/2})
  double min_density_margin = 1e9;             // density - guaranteed
  int fails_1 = 0, fails_2 = 0;
};

const DeligneScan& deligne_scan() {
  static const DeligneScan scan = [] {
    DeligneScan s;
    for (std::size_t d : {1u, 2u}) {
      const IntPolynomial p = family_diagonal(d, 3);
      for (std::int64_t q : primes_in_band(5, d == 1 ? 500 : 102).primes) {
        if (q == 3) continue;
        const WeylTable t = weyl_table(p, q);
        const DeligneReport r = deligne_check(t, 3);
        const double ratio = r.max_modulus / r.bound;
        (d == 1 ? s.worst_ratio_1 : s.worst_ratio_2) = std::max(d == 1 ? s.worst_ratio_1 : s.worst_ratio_2, ratio);
        if (!r.ok) ++(d == 1 ? s.fails_1 : s.fails_2);
        const double threshold = 0.5 * std::pow(static_cast<double>(q), 0.5 * static_cast<double>(d));
        std::uint64_t good = 0;
        for (const cplx& v : t.values) good += std::abs(v) >= threshold;
        const double density = static_cast<double>(good) / static_cast<double>(t.size());
        s.min_density_margin = std::min(s.min_density_margin, density - guaranteed_density(0.5, 3));
      }
    }
    return s;
  }();
  return scan;
}

bool deligne() {
  const DeligneScan& s = deligne_scan();
  return report("3", s.fails_1 + s.fails_2 == 0,
                fmt("X^3: max|S|/2sqrt(q) = %.4f (%.0f fails); X1^3+X2^3: max|S|/2q = %.4f (%.0f fails)",
                    s.worst_ratio_1, s.fails_1, s.worst_ratio_2, s.fails_2));
}

bool density() {
  const DeligneScan& s = deligne_scan();
  return report("4", s.min_density_margin >= 0,
                fmt("min density - 3/16 = %.4f over X^3 (q<500) and X1^3+X2^3 (q<=101)", s.min_density_margin));
}

bool lattice() {
  bool bound_ok = true, agree = true;
  std::int64_t pairs = 0;
  for (std::int64_t q = 1; q <= 128; ++q)
    for (std::int64_t q2 = 1; q2 <= 128; ++q2)
      for (double A : {0.5, 1.0, 2.0, 5.0, 10.0}) {
        const std::int64_t fast = lattice_pair_count(q, q2, A);
        bound_ok = bound_ok && static_cast<double>(fast) <= 2 * A;
        agree = agree && fast == lattice_pair_count_brute(q, q2, A);
        ++pairs;
      }
  return report("5", bound_ok && agree,
                fmt("%.0f (q, q', A) cases with q, q' <= 128", pairs) + "; count <= 2A: " + (bound_ok ? "yes" : "no") +
                    "; fast == brute: " + (agree ? "yes" : "no"));
}

bool decomposition() {
  std::mt19937_64 rng(20261018);
  auto pick = [&](std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng); };
  const std::vector<IntPolynomial> one{family_diagonal(1, 2), family_diagonal(1, 3), quartic_plus_linear()};
  const std::vector<IntPolynomial> two{family_diagonal(2, 2), family_diagonal(2, 3), family_power_laplacian(2, 2)};
  // Relative to |direct| at good points b in G(q); relative to the l1 size
  // of the coefficients at arbitrary b, where S(b) may vanish.
  double worst_good = 0, worst_any = 0, worst_fold = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = trial % 2 ? 2 : 1;
    const IntPolynomial& p = d == 1 ? one[pick(0, 2)] : two[pick(0, 2)];
    const std::int64_t N = d == 1 ? pick(64, 8192) : pick(48, 256);
    auto band = primes_in_band(3, std::min<std::int64_t>((N - 1) / 4, d == 1 ? 400 : 40)).primes;
    std::erase_if(band, [&](std::int64_t q) { return p.degree() % q == 0; });
    const std::int64_t q = band[pick(0, static_cast<std::int64_t>(band.size()) - 1)];
    const Datum f = datum_coefficients(N, d);
    const WeylTable t = weyl_table(p, q);
    const GoodSet g = good_set(t, 0.5, p.degree());
    const double budget = kRho / (static_cast<double>(d) * static_cast<double>(N));
    for (bool good : {true, false}) {
      RationalPoint pt{std::vector<std::int64_t>(d), q, std::vector<double>(d)};
      if (good)
        unflatten(g.members[pick(0, static_cast<std::int64_t>(g.members.size()) - 1)], q, pt.b);
      else
        for (auto& b : pt.b) b = pick(0, q - 1);
      for (auto& x : pt.delta) x = std::uniform_real_distribution<double>(-budget, budget)(rng);
      const MainError me = main_error_split(p, f, pt, t);
      const FoldedZ z = fold(f, q, pt.delta);
      const cplx E = error_term_spectral(spectrum(z), t, pt.b);
      const double scale = good ? std::abs(me.direct) : coefficient_l1(f);
      (good ? worst_good : worst_any) =
          std::max(good ? worst_good : worst_any, std::abs(me.main + E - me.direct) / scale);
      worst_fold = std::max(worst_fold, std::abs(fold_and_sum(p, z, pt.b) - me.direct) / scale);
    }
  }
  return report("6", worst_good < kDecompTol && worst_any < kDecompTol && worst_fold < kDecompTol,
                fmt("100 tuples, d in {1,2}: |M + E - direct| / |direct| <= %.3g at b in G(q); / sum|phi| <= %.3g "
                    "at random b; fold path %.3g",
                    worst_good, worst_any, worst_fold));
}

bool error_domination() {
  const std::int64_t N = 1 << 14;
  const IntPolynomial p = family_diagonal(1, 2);
  const Datum f = datum_coefficients(N, 1);
  const std::int64_t Q = coupling_Q(N, 1);
  const double budget = kRho / static_cast<double>(N);
  std::mt19937_64 rng(7);
  double worst = 0;
  std::uint64_t points = 0;
  for (std::int64_t q : primes_in_band(Q, 2 * Q).primes) {
    const WeylTable t = weyl_table(p, q);
    const GoodSet g = good_set(t, 0.5, 2);
    std::vector<std::int64_t> b(1);
    for (std::uint64_t m : g.members) {
      unflatten(m, static_cast<std::uint64_t>(q), b);
      for (double delta : {0.0, std::uniform_real_distribution<double>(-budget, budget)(rng)}) {
        worst = std::max(worst, main_error_split(p, f, {b, q, {delta}}, t).ratio());
        ++points;
      }
    }
  }
  return report("7", worst <= kErrorRatioMax,
                fmt("N = 2^14, Q = %.0f: max |E|/|M| = %.3g over %.0f (q, b, delta) points", Q, worst, points));
}

bool measure_law() {
  const IntPolynomial p = family_diagonal(1, 2);
  std::vector<double> exact, lower;
  for (std::int64_t N = 1 << 10; N <= 1 << 16; N *= 2) {
    const DivergenceSet x = build_divergence_set(p, N, 0.5, kRho);
    const MeasureResult m = measure(x);
    const double lq = std::log(static_cast<double>(x.Q));
    exact.push_back(m.estimate * lq);
    lower.push_back(m.lower_bound * lq);
  }
  const double hi = *std::max_element(exact.begin(), exact.end());
  const double lo = *std::min_element(exact.begin(), exact.end());
  const double lower_min = *std::min_element(lower.begin(), lower.end());
  const double lower_max = *std::max_element(lower.begin(), lower.end());
  const bool ok = hi / lo <= kMeasureBand && lower_min >= hi / kMeasureBand && lower_max <= hi;
  return report("8", ok,
                fmt("|X_N| log Q in [%.4f, %.4f] (spread %.3f); Cauchy-Schwarz bound x log Q in [%.4f, ...]", lo, hi,
                    hi / lo, lower_min));
}

bool blowup() {
  std::vector<std::int64_t> ladder;
  for (std::int64_t N = 1 << 10; N <= 1 << 15; N *= 2) ladder.push_back(N);
  ExperimentConfig cfg;
  std::map<std::pair<unsigned, double>, FitResult> fits;
  std::map<unsigned, bool> increasing;
  for (unsigned k : {2u, 3u})
    for (double s : {0.0, 0.25}) {
      const auto start = std::chrono::steady_clock::now();
      const auto rows = ratio_experiment(family_diagonal(1, k), s, ladder, cfg);
      bool up = true;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        up = up && !rows[i].failed && (i == 0 || rows[i].ratio > rows[i - 1].ratio);
        std::printf("  k=%u s=%.2f N=%-6lld J=%-6llu |X_N|=%.5f sup_lb=%.2f ratio=%.5f\n", k, s,
                    static_cast<long long>(rows[i].N), static_cast<unsigned long long>(rows[i].J), rows[i].measure,
                    rows[i].sup_lb, rows[i].ratio);
      }
      if (s == 0.0) increasing[k] = up;
      fits[{k, s}] = fit_exponent(rows);
      std::printf("  k=%u s=%.2f slope=%.4f log-corrected=%.4f (%.1f s)\n", k, s, fits[{k, s}].slope,
                  fits[{k, s}].log_corrected_slope,
                  std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }
  const double s2 = fits[{2, 0.0}].log_corrected_slope, s3 = fits[{3, 0.0}].log_corrected_slope;
  const bool in2 = s2 >= kSlopeLo && s2 <= kSlopeHi, in3 = s3 >= kSlopeLo && s3 <= kSlopeHi;
  const bool ok9 = increasing[2] && increasing[3] && in2 && in3 && std::abs(s2 - s3) < kSlopeGap;
  report("9", ok9,
         fmt("ratio increasing k=2: ", 0) + (increasing[2] ? "yes" : "no") + ", k=3: " + (increasing[3] ? "yes" : "no") +
             fmt("; log-corrected slopes %.4f (k=2), %.4f (k=3), gap %.4f", s2, s3, std::abs(s2 - s3)));
  const double f2 = fits[{2, 0.25}].log_corrected_slope, f3 = fits[{3, 0.25}].log_corrected_slope;
  const bool ok10 = std::abs(f2) <= kFlatTol && std::abs(f3) <= kFlatTol;
  report("10", ok10, fmt("s = 0.25: log-corrected slopes %.4f (k=2), %.4f (k=3)", f2, f3));
  return ok9 && ok10;
}

bool summation_by_parts() {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss;
  double worst_sbp = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 1 + trial % 3;
    const std::int64_t q = std::vector<std::int64_t>{5, 7, 11, 17}[trial % 4];
    ResidueGrid g{q, d, std::vector<cplx>(grid_size(q, d, 1 << 20))};
    ResidueGrid h = g;
    for (auto& v : g.values) v = {gauss(rng), gauss(rng)};
    for (auto& v : h.values) v = {gauss(rng), gauss(rng)};
    worst_sbp = std::max(worst_sbp, sbp_check(g, h));
  }
  double worst_eig = 0;
  for (std::size_t d : {1u, 2u})
    for (std::int64_t q : {5, 17, 101}) {
      std::vector<cplx> unit(q);
      for (std::int64_t m = 0; m < q; ++m) unit[m] = std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(m) / q);
      const std::uint64_t cells = grid_size(q, d, 1 << 20);
      ResidueGrid wave{q, d, std::vector<cplx>(cells)};
      std::vector<std::int64_t> l(d), r(d);
      for (std::uint64_t li = 0; li < cells; ++li) {
        unflatten(li, q, l);
        for (std::uint64_t ri = 0; ri < cells; ++ri) {
          unflatten(ri, q, r);
          std::int64_t dot = 0;
          for (std::size_t j = 0; j < d; ++j) dot += r[j] * l[j];
          wave.values[ri] = unit[dot % q];
        }
        const ResidueGrid lap = discrete_laplacian(wave);
        const double a = laplacian_symbol(l, q);
        for (std::uint64_t ri = 0; ri < cells; ++ri)
          worst_eig = std::max(worst_eig, std::abs(lap.values[ri] - a * wave.values[ri]));
      }
    }
  return report("11", worst_sbp < kSbpTol && worst_eig < kSbpTol,
                fmt("SBP residual %.3g over 100 pairs; eigenrelation error %.3g for q in {5,17,101}, d in {1,2}", worst_sbp,
                    worst_eig));
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<bool()>>> all{
      {"1", parseval},           {"2", gauss},          {"3", deligne},      {"4", density},
      {"5", lattice},            {"6", decomposition},  {"7", error_domination}, {"8", measure_law},
      {"9_10", blowup},          {"11", summation_by_parts}};
  std::vector<std::string> wanted(argv + 1, argv + argc);
  bool ok = true;
  for (const auto& [id, fn] : all) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), id) == wanted.end()) continue;
    try {
      ok = fn() && ok;
    } catch (const std::exception& e) {
      ok = report(id, false, std::string("threw: ") + e.what()) && ok;
    }
  }
  return ok ? 0 : 1;
}
