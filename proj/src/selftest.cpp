#include "weylmax/selftest.hpp"

#include <cmath>
#include <functional>

#include "weylmax/datum.hpp"
#include "weylmax/decomp.hpp"
#include "weylmax/divset.hpp"
#include "weylmax/errors.hpp"
#include "weylmax/experiment.hpp"
#include "weylmax/numtheory.hpp"
#include "weylmax/report.hpp"
#include "weylmax/weyl.hpp"

namespace weylmax {

namespace {

SelftestCase run_case(const std::string& name, const std::function<std::string()>& body) {
  try {
    std::string failure = body();
    return {name, failure.empty(), failure};
  } catch (const std::exception& e) {
    return {name, false, std::string("threw: ") + e.what()};
  }
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

std::vector<SelftestCase> run_selftest() {
  std::vector<SelftestCase> out;

  out.push_back(run_case("primes in [2, 30)", [] {
    return primes_in_band(2, 30).primes.size() == 10 ? "" : "expected 10 primes";
  }));
  out.push_back(run_case("lattice-count 3 5 2 = 4", [] {
    const auto n = lattice_pair_count(3, 5, 2.0);
    return n == 4 ? std::string() : "got " + std::to_string(n);
  }));
  out.push_back(run_case("P(n) mod q for X^2 at 10 mod 7", [] {
    const std::int64_t n[] = {10};
    return eval_poly_mod(family_diagonal(1, 2), n, 7) == 2 ? "" : "expected 2";
  }));
  out.push_back(run_case("Gauss sums have modulus sqrt(7)", [] {
    const WeylTable t = weyl_table(family_diagonal(1, 2), 7);
    for (const cplx& v : t.values)
      if (!near(std::abs(v), std::sqrt(7.0), 1e-12)) return "modulus " + format_double(std::abs(v));
    return std::string();
  }));
  out.push_back(run_case("Parseval for X^3 at q = 7", [] {
    const double defect = parseval_defect(weyl_table(family_diagonal(1, 3), 7));
    return defect < 1e-12 ? std::string() : "defect " + format_double(defect);
  }));
  out.push_back(run_case("G(q) is everything for k = 2", [] {
    const GoodSet g = good_set(weyl_table(family_diagonal(1, 2), 11), 0.5, 2);
    return g.density == 1.0 ? std::string() : "density " + format_double(g.density);
  }));
  out.push_back(run_case("bump plateau and support", [] {
    return bump(0.75) == 1.0 && bump(0.2) == 0.0 && bump(2.0) == 0.0 ? "" : "bad bump values";
  }));
  out.push_back(run_case("solution at t = 0 matches coefficient sum", [] {
    const Datum f = datum_coefficients(16, 1);
    const double x[] = {0.0};
    double total = 0;
    for (double v : f.profile()) total += v;
    const double got = evaluate_initial(f, x).real();
    return near(got, total, 1e-12) ? std::string() : "got " + format_double(got);
  }));
  out.push_back(run_case("fold then spectrum then invert", [] {
    const Datum f = datum_coefficients(64, 1);
    const double delta[] = {0.0};
    const double defect = inversion_defect(fold(f, 7, delta).grid);
    return defect < 1e-12 ? std::string() : "defect " + format_double(defect);
  }));
  out.push_back(run_case("single ball measure = 2 rho / N", [] {
    const DivergenceSet x = divergence_set_from_balls(1024, 1, 1.0 / 32, {{7, {3}}});
    const double m = measure(x).estimate;
    return near(m, 2.0 / 32 / 1024, 1e-18) ? std::string() : "got " + format_double(m);
  }));
  out.push_back(run_case("two disjoint balls: sum and 2 self-pairs", [] {
    const DivergenceSet x = divergence_set_from_balls(1024, 1, 1.0 / 32, {{7, {1}}, {7, {4}}});
    const MeasureResult r = measure(x);
    if (!near(r.estimate, 4.0 / 32 / 1024, 1e-18)) return "measure " + format_double(r.estimate);
    return r.overlap_pairs == 2 ? std::string() : "pairs " + std::to_string(r.overlap_pairs);
  }));
  out.push_back(run_case("fit of an exact power law", [] {
    std::vector<ExperimentRow> rows;
    for (std::int64_t N : {1024, 2048, 4096, 8192}) {
      ExperimentRow r;
      r.N = N;
      r.ratio = std::pow(static_cast<double>(N), 0.25);
      rows.push_back(r);
    }
    const FitResult fit = fit_exponent(rows);
    return near(fit.slope, 0.25, 1e-12) ? std::string() : "slope " + format_double(fit.slope);
  }));
  out.push_back(run_case("fit refuses a single row", [] {
    ExperimentRow r;
    r.N = 1024;
    r.ratio = 2;
    try {
      fit_exponent({r});
    } catch (const Error& e) {
      return e.kind() == ErrorKind::insufficient_data ? std::string() : "wrong error kind";
    }
    return std::string("no error");
  }));
  out.push_back(run_case("exit codes", [] {
    return exit_code(ErrorKind::input) == 2 && exit_code(ErrorKind::resource) == 3 &&
                   exit_code(ErrorKind::invariant) == 4
               ? ""
               : "unexpected mapping";
  }));
  return out;
}

}  // namespace weylmax
