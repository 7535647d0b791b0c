#include "weylmax/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "weylmax/datum.hpp"
#include "weylmax/decomp.hpp"
#include "weylmax/divset.hpp"
#include "weylmax/errors.hpp"
#include "weylmax/experiment.hpp"
#include "weylmax/numtheory.hpp"
#include "weylmax/report.hpp"
#include "weylmax/selftest.hpp"
#include "weylmax/weyl.hpp"

namespace weylmax {

namespace {

using json = nlohmann::ordered_json;

constexpr double kParsevalTolerance = 1e-9;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorKind::input, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Inline JSON when the argument starts with '{', a file path otherwise.
// Without --poly, --d and --k select X_1^k + ... + X_d^k.
IntPolynomial resolve_polynomial(RunConfig& cfg) {
  IntPolynomial p(1);
  if (!cfg.poly.empty()) {
    const auto first = cfg.poly.find_first_not_of(" \t\r\n");
    const bool inline_json = first != std::string::npos && cfg.poly[first] == '{';
    p = parse_polynomial(inline_json ? cfg.poly : read_file(cfg.poly));
  } else {
    require(cfg.d >= 1 && cfg.k >= 2, ErrorKind::input, "give --poly, or --d and --k for X_1^k + ... + X_d^k");
    p = family_diagonal(cfg.d, cfg.k);
  }
  require(!p.empty(), ErrorKind::input, "polynomial has no terms");
  require(cfg.d == 0 || cfg.d == p.dim(), ErrorKind::input,
          "--d " + std::to_string(cfg.d) + " does not match the polynomial dimension " + std::to_string(p.dim()));
  require(cfg.k == 0 || cfg.k == p.degree(), ErrorKind::input,
          "--k " + std::to_string(cfg.k) + " does not match the polynomial degree " + std::to_string(p.degree()));
  cfg.d = p.dim();
  cfg.k = p.degree();
  cfg.poly = serialize_polynomial(p);
  return p;
}

std::ostream& open_out(const std::string& path, std::ofstream& file, std::ostream& fallback) {
  if (path.empty() || path == "-") return fallback;
  file.open(path, std::ios::binary);
  require(file.good(), ErrorKind::input, "cannot write '" + path + "'");
  return file;
}

void check_parseval(const WeylTable& t) {
  const double defect = parseval_defect(t);
  require(defect < kParsevalTolerance, ErrorKind::invariant,
          "Parseval defect " + format_double(defect) + " exceeds " + format_double(kParsevalTolerance));
}

void write_weyl_rows(std::ostream& os, const WeylTable& t, const std::vector<std::uint64_t>* subset,
                     const RunConfig& cfg) {
  write_header_line(os, to_json(cfg));
  for (std::size_t i = 1; i <= t.d; ++i) os << 'b' << i << ',';
  os << "re,im,modulus\n";
  std::vector<std::int64_t> b(t.d);
  auto row = [&](std::uint64_t flat) {
    unflatten(flat, static_cast<std::uint64_t>(t.q), b);
    for (std::int64_t bi : b) os << bi << ',';
    const cplx v = t.values[flat];
    os << format_double(v.real()) << ',' << format_double(v.imag()) << ',' << format_double(std::abs(v))
       << '\n';
  };
  if (subset)
    for (std::uint64_t flat : *subset) row(flat);
  else
    for (std::uint64_t flat = 0; flat < t.size(); ++flat) row(flat);
}

json complex_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

RationalPoint point_from(const RunConfig& cfg) {
  require(cfg.b.size() == cfg.d, ErrorKind::input,
          "--b needs " + std::to_string(cfg.d) + " components, got " + std::to_string(cfg.b.size()));
  RationalPoint pt{cfg.b, cfg.q, cfg.delta};
  if (pt.delta.empty()) pt.delta.assign(cfg.d, 0.0);
  require(pt.delta.size() == cfg.d, ErrorKind::input, "--delta has the wrong number of components");
  return pt;
}

BuildMethod build_method(const std::string& name) {
  if (name.empty() || name == "dft") return BuildMethod::dft;
  if (name == "direct") return BuildMethod::direct;
  fail(ErrorKind::input, "unknown method '" + name + "', want dft or direct");
}

}  // namespace

json to_json(const RunConfig& cfg) {
  json j{{"command", cfg.command}};
  if (!cfg.poly.empty()) j["poly"] = json::parse(cfg.poly);
  if (cfg.d) j["d"] = cfg.d;
  if (cfg.k) j["k"] = cfg.k;
  j["s"] = cfg.s;
  if (cfg.N) j["N"] = cfg.N;
  if (!cfg.ladder.empty()) j["n_ladder"] = cfg.ladder;
  if (cfg.q) j["q"] = cfg.q;
  if (!cfg.b.empty()) j["b"] = cfg.b;
  if (!cfg.delta.empty()) j["delta"] = cfg.delta;
  j["c"] = cfg.c;
  j["rho"] = cfg.rho;
  j["seed"] = cfg.seed;
  j["sample_budget"] = cfg.sample_budget;
  j["mc_samples"] = cfg.mc_samples;
  if (!cfg.method.empty()) j["method"] = cfg.method;
  if (!cfg.in.empty()) j["in"] = cfg.in;
  if (!cfg.out.empty()) j["out"] = cfg.out;
  j["threads"] = cfg.threads;
  return j;
}

std::vector<std::int64_t> parse_ladder(const std::string& text) {
  std::vector<std::string> tokens;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto a = tok.find_first_not_of(' ');
    const auto z = tok.find_last_not_of(' ');
    tokens.push_back(a == std::string::npos ? "" : tok.substr(a, z - a + 1));
  }
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] == "...") {
      require(out.size() >= 2 && i + 1 < tokens.size(), ErrorKind::input,
              "'...' needs two entries before it and one after");
      const std::int64_t a = out[out.size() - 2];
      const std::int64_t b = out.back();
      require(a > 0 && b > a && b % a == 0, ErrorKind::input, "'...' needs an integer ratio before it");
      const std::int64_t r = b / a;
      std::size_t used = 0;
      const std::int64_t stop = std::stoll(tokens[i + 1], &used);
      require(used == tokens[i + 1].size(), ErrorKind::input, "bad ladder entry '" + tokens[i + 1] + "'");
      for (std::int64_t v = b * r; v < stop; v *= r) out.push_back(v);
      continue;
    }
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(tokens[i], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    require(!tokens[i].empty() && used == tokens[i].size(), ErrorKind::input,
            "bad ladder entry '" + tokens[i] + "'");
    out.push_back(v);
  }
  require(!out.empty(), ErrorKind::input, "empty N ladder");
  return out;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weyl sums, divergence sets and maximal-function ratios on the torus", "weylmax"};
  app.set_version_flag("--version", WEYLMAX_VERSION);
  app.require_subcommand(1);

  RunConfig cfg;
  std::string b_text, delta_text, ladder_text;
  bool unsafe_float = false;
  double lattice_A = 0;
  std::int64_t lattice_q2 = 0;

  auto poly_opts = [&](CLI::App* sub) {
    sub->add_option("--poly", cfg.poly, "Polynomial as inline JSON or a file path");
    sub->add_option("--d", cfg.d, "Dimension; checked against --poly");
    sub->add_option("--k", cfg.k, "Degree; checked against --poly");
    sub->add_option("--threads", cfg.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
  };

  auto* weyl_cmd = app.add_subcommand("weyl-table", "All S(b) for one prime q, as CSV");
  poly_opts(weyl_cmd);
  weyl_cmd->add_option("--q", cfg.q, "Prime modulus")->required();
  weyl_cmd->add_option("--method", cfg.method, "dft (default) or direct");
  weyl_cmd->add_option("--out", cfg.out, "Output CSV (default stdout)");

  auto* deligne_cmd = app.add_subcommand("verify-deligne", "max |S(b)| against (k-1) q^{d/2}");
  poly_opts(deligne_cmd);
  deligne_cmd->add_option("--q", cfg.q, "Prime modulus")->required();

  auto* good_cmd = app.add_subcommand("good-set", "Density of G(q) = {|S(b)| >= c q^{d/2}}");
  poly_opts(good_cmd);
  good_cmd->add_option("--q", cfg.q, "Prime modulus")->required();
  good_cmd->add_option("--c", cfg.c, "Threshold constant")->capture_default_str();
  good_cmd->add_option("--out", cfg.out, "Optional CSV of the members");

  auto* eval_cmd = app.add_subcommand("solution-eval", "e^{itP(D)} f_N at x = b/q + delta, t = 1/q");
  poly_opts(eval_cmd);
  eval_cmd->add_option("--N", cfg.N, "Datum scale")->required();
  eval_cmd->add_option("--q", cfg.q, "Denominator")->required();
  eval_cmd->add_option("--b", b_text, "Numerators, comma-separated")->required();
  eval_cmd->add_option("--delta", delta_text, "Perturbation, comma-separated");
  eval_cmd->add_flag("--unsafe-float", unsafe_float, "Floating phase reduction (demonstration only)");

  auto* decomp_cmd = app.add_subcommand("decompose", "Main term Zhat(0) S(b) and error term");
  poly_opts(decomp_cmd);
  decomp_cmd->add_option("--N", cfg.N, "Datum scale")->required();
  decomp_cmd->add_option("--q", cfg.q, "Prime modulus")->required();
  decomp_cmd->add_option("--b", b_text, "Numerators, comma-separated")->required();
  decomp_cmd->add_option("--delta", delta_text, "Perturbation, comma-separated");

  auto* build_cmd = app.add_subcommand("build-xn", "Ball list of the divergence set X_N");
  poly_opts(build_cmd);
  build_cmd->add_option("--N", cfg.N, "Datum scale")->required();
  build_cmd->add_option("--c", cfg.c, "Good-set threshold")->capture_default_str();
  build_cmd->add_option("--rho", cfg.rho, "Ball radius constant")->capture_default_str();
  build_cmd->add_option("--out", cfg.out, "Output CSV")->required();

  auto* measure_cmd = app.add_subcommand("measure-xn", "Measure of a ball list written by build-xn");
  measure_cmd->add_option("--in", cfg.in, "Ball CSV")->required();
  measure_cmd->add_option("--method", cfg.method, "exact (d = 1 default) or montecarlo");
  measure_cmd->add_option("--samples", cfg.mc_samples, "Monte Carlo samples")->capture_default_str();
  measure_cmd->add_option("--seed", cfg.seed, "Monte Carlo seed")->capture_default_str();
  measure_cmd->add_option("--N", cfg.N, "Override N from the file header");
  measure_cmd->add_option("--rho", cfg.rho, "Override rho from the file header");
  measure_cmd->add_option("--threads", cfg.threads, "Worker threads")->check(CLI::Range(1u, 1024u));

  auto* ratio_cmd = app.add_subcommand("ratio-experiment", "Ratio sup_lb |X_N|^{1/2} / |f_N|_{H^s} per N");
  poly_opts(ratio_cmd);
  ratio_cmd->add_option("--s", cfg.s, "Sobolev exponent")->capture_default_str();
  ratio_cmd->add_option("--n-ladder", ladder_text, "Ascending N values, e.g. 1024,2048,...,32768")->required();
  ratio_cmd->add_option("--c", cfg.c, "Good-set threshold")->capture_default_str();
  ratio_cmd->add_option("--rho", cfg.rho, "Ball radius constant")->capture_default_str();
  ratio_cmd->add_option("--seed", cfg.seed, "Sampling seed")->capture_default_str();
  ratio_cmd->add_option("--sample-budget", cfg.sample_budget, "Balls scanned per N")->capture_default_str();
  ratio_cmd->add_option("--mc-samples", cfg.mc_samples, "Monte Carlo samples for d >= 2")->capture_default_str();
  ratio_cmd->add_option("--out", cfg.out, "Rows CSV")->required();

  auto* fit_cmd = app.add_subcommand("fit", "Power-law fit of a rows CSV");
  fit_cmd->add_option("--in", cfg.in, "Rows CSV")->required();

  auto* lattice_cmd = app.add_subcommand("lattice-count", "Pairs with 0 < |b q' - b' q| <= A");
  lattice_cmd->add_option("q", cfg.q, "First modulus")->required();
  lattice_cmd->add_option("q2", lattice_q2, "Second modulus")->required();
  lattice_cmd->add_option("A", lattice_A, "Bound")->required();

  auto* selftest_cmd = app.add_subcommand("selftest", "Closed-form examples from every module");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << WEYLMAX_VERSION << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    auto parse_ints = [](const std::string& text) {
      std::vector<std::int64_t> v;
      for (std::int64_t x : parse_ladder(text)) v.push_back(x);
      return v;
    };
    auto parse_reals = [](const std::string& text) {
      std::vector<double> v;
      std::stringstream ss(text);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        char* end = nullptr;
        const double x = std::strtod(tok.c_str(), &end);
        require(!tok.empty() && *end == '\0', ErrorKind::input, "bad real '" + tok + "'");
        v.push_back(x);
      }
      return v;
    };
    if (!b_text.empty()) cfg.b = parse_ints(b_text);
    if (!delta_text.empty()) cfg.delta = parse_reals(delta_text);

    if (weyl_cmd->parsed()) {
      cfg.command = "weyl-table";
      const IntPolynomial p = resolve_polynomial(cfg);
      const WeylTable t = weyl_table(p, cfg.q, build_method(cfg.method));
      check_parseval(t);
      std::ofstream file;
      write_weyl_rows(open_out(cfg.out, file, out), t, nullptr, cfg);
    } else if (deligne_cmd->parsed()) {
      cfg.command = "verify-deligne";
      const IntPolynomial p = resolve_polynomial(cfg);
      const WeylTable t = weyl_table(p, cfg.q);
      check_parseval(t);
      json j{{"q", cfg.q}, {"d", cfg.d}, {"k", cfg.k}};
      const json rep = to_json(deligne_check(t, cfg.k));
      for (const auto& [key, value] : rep.items()) j[key] = value;
      j["parseval_defect"] = parseval_defect(t);
      out << dump_json(j) << '\n';
    } else if (good_cmd->parsed()) {
      cfg.command = "good-set";
      const IntPolynomial p = resolve_polynomial(cfg);
      const WeylTable t = weyl_table(p, cfg.q);
      check_parseval(t);
      const DeligneReport rep = deligne_check(t, cfg.k);
      const GoodSet g = good_set(t, cfg.c, cfg.k);
      out << dump_json(json{{"q", cfg.q},
                            {"d", cfg.d},
                            {"k", cfg.k},
                            {"c", cfg.c},
                            {"max_modulus", rep.max_modulus},
                            {"bound", rep.bound},
                            {"deligne_ok", rep.ok},
                            {"count", g.members.size()},
                            {"total", g.total},
                            {"density", g.density},
                            {"guaranteed_density", guaranteed_density(cfg.c, cfg.k)}})
          << '\n';
      if (!cfg.out.empty()) {
        std::ofstream file;
        write_weyl_rows(open_out(cfg.out, file, out), t, &g.members, cfg);
      }
    } else if (eval_cmd->parsed()) {
      cfg.command = "solution-eval";
      const IntPolynomial p = resolve_polynomial(cfg);
      const Datum f = datum_coefficients(cfg.N, cfg.d);
      const RationalPoint pt = point_from(cfg);
      cplx u;
      if (unsafe_float) {
        err << "warning: --unsafe-float reduces phases in floating point and is not valid for experiments\n";
        std::vector<double> x(cfg.d);
        for (std::size_t i = 0; i < cfg.d; ++i)
          x[i] = static_cast<double>(pt.b[i]) / static_cast<double>(pt.q) + pt.delta[i];
        u = evaluate_solution_unsafe_float(p, f, x, 1.0 / static_cast<double>(pt.q));
      } else {
        u = evaluate_solution(p, f, pt, {cfg.threads});
      }
      out << dump_json(json{{"N", cfg.N},
                            {"q", cfg.q},
                            {"b", pt.b},
                            {"delta", pt.delta},
                            {"t", 1.0 / static_cast<double>(cfg.q)},
                            {"re", u.real()},
                            {"im", u.imag()},
                            {"modulus", std::abs(u)},
                            {"exact_phase", !unsafe_float}})
          << '\n';
    } else if (decomp_cmd->parsed()) {
      cfg.command = "decompose";
      const IntPolynomial p = resolve_polynomial(cfg);
      const Datum f = datum_coefficients(cfg.N, cfg.d);
      const RationalPoint pt = point_from(cfg);
      const WeylTable t = weyl_table(p, cfg.q);
      const MainError me = main_error_split(p, f, pt, t, {cfg.threads});
      out << dump_json(json{{"M_re", me.main.real()},
                            {"M_im", me.main.imag()},
                            {"E_re", me.error.real()},
                            {"E_im", me.error.imag()},
                            {"ratio", me.ratio()},
                            {"Zhat0", complex_json(me.zhat0)},
                            {"S", complex_json(t.at(pt.b))},
                            {"direct", complex_json(me.direct)}})
          << '\n';
    } else if (build_cmd->parsed()) {
      cfg.command = "build-xn";
      const IntPolynomial p = resolve_polynomial(cfg);
      const DivergenceSet x = build_divergence_set(p, cfg.N, cfg.c, cfg.rho, {cfg.threads});
      for (const PrimeProvenance& pp : x.per_prime)
        require(pp.parseval_defect < kParsevalTolerance, ErrorKind::invariant,
                "Parseval defect " + format_double(pp.parseval_defect) + " at q = " + std::to_string(pp.q));
      std::ofstream file;
      write_balls_csv(open_out(cfg.out, file, out), x, to_json(cfg));
      json primes = json::array();
      for (const PrimeProvenance& pp : x.per_prime)
        primes.push_back(json{{"q", pp.q}, {"good", pp.good_count}, {"density", pp.density},
                              {"deligne_ok", pp.deligne.ok}});
      out << dump_json(json{{"N", x.N}, {"Q", x.Q}, {"d", x.d}, {"k", x.k}, {"J", x.J()},
                            {"primes", primes}, {"dropped", x.dropped}})
          << '\n';
    } else if (measure_cmd->parsed()) {
      cfg.command = "measure-xn";
      std::ifstream in(cfg.in, std::ios::binary);
      require(in.good(), ErrorKind::input, "cannot open '" + cfg.in + "'");
      BallsFile file = read_balls_csv(in);
      const json& hc = file.header.contains("config") ? file.header["config"] : json::object();
      if (cfg.N == 0 && hc.contains("N")) cfg.N = hc["N"].get<std::int64_t>();
      if (measure_cmd->count("--rho") == 0 && hc.contains("rho")) cfg.rho = hc["rho"].get<double>();
      require(cfg.N > 0, ErrorKind::input, "N missing: the file header has none and --N was not given");
      cfg.d = file.d;
      const DivergenceSet x = divergence_set_from_balls(cfg.N, file.d, cfg.rho, std::move(file.balls));
      if (cfg.method.empty()) cfg.method = x.d == 1 ? "exact" : "montecarlo";
      MeasureMethod m;
      if (cfg.method == "exact")
        m = MeasureMethod::exact();
      else if (cfg.method == "montecarlo")
        m = MeasureMethod::montecarlo(cfg.mc_samples, cfg.seed, cfg.threads);
      else
        fail(ErrorKind::input, "unknown method '" + cfg.method + "', want exact or montecarlo");
      const MeasureResult r = measure(x, m);
      if (r.low_sample_warning)
        err << "warning: " << r.samples << " samples is below " << kMinMonteCarloSamples << '\n';
      out << dump_json(to_json(r)) << '\n';
    } else if (ratio_cmd->parsed()) {
      cfg.command = "ratio-experiment";
      const IntPolynomial p = resolve_polynomial(cfg);
      cfg.ladder = parse_ladder(ladder_text);
      ExperimentConfig ec{cfg.c, cfg.rho, cfg.seed, cfg.sample_budget, cfg.mc_samples, cfg.threads};
      const auto rows = ratio_experiment(p, cfg.s, cfg.ladder, ec);
      std::ofstream file;
      write_rows_csv(open_out(cfg.out, file, out), rows, to_json(cfg));
      json j = json::array();
      for (const ExperimentRow& r : rows) {
        if (r.failed) err << "warning: N = " << r.N << " failed: " << r.message << '\n';
        j.push_back(to_json(r));
      }
      out << dump_json(json{{"rows", j}}) << '\n';
    } else if (fit_cmd->parsed()) {
      cfg.command = "fit";
      std::ifstream in(cfg.in, std::ios::binary);
      require(in.good(), ErrorKind::input, "cannot open '" + cfg.in + "'");
      out << dump_json(to_json(fit_exponent(read_rows_csv(in).rows))) << '\n';
    } else if (lattice_cmd->parsed()) {
      cfg.command = "lattice-count";
      const std::int64_t count = lattice_pair_count(cfg.q, lattice_q2, lattice_A);
      const double bound = 2.0 * lattice_A;
      out << dump_json(json{{"count", count}, {"bound", bound}, {"ok", static_cast<double>(count) <= bound}})
          << '\n';
    } else if (selftest_cmd->parsed()) {
      bool all = true;
      for (const SelftestCase& c : run_selftest()) {
        out << (c.ok ? "PASS " : "FAIL ") << c.name;
        if (!c.detail.empty()) out << "  (" << c.detail << ')';
        out << '\n';
        all = all && c.ok;
      }
      return all ? 0 : 4;
    }
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::bad_alloc&) {
    err << "error (resource): out of memory\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error (input): " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace weylmax
