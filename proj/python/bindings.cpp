#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "weylmax/datum.hpp"
#include "weylmax/decomp.hpp"
#include "weylmax/divset.hpp"
#include "weylmax/errors.hpp"
#include "weylmax/experiment.hpp"
#include "weylmax/numtheory.hpp"
#include "weylmax/selftest.hpp"
#include "weylmax/weyl.hpp"

namespace py = pybind11;
using namespace weylmax;

namespace {

py::dict deligne_dict(const DeligneReport& r) {
  py::dict d;
  d["max_modulus"] = r.max_modulus;
  d["bound"] = r.bound;
  d["ok"] = r.ok;
  d["bound_general"] = r.bound_general;
  d["ok_general"] = r.ok_general;
  return d;
}

py::dict row_dict(const ExperimentRow& r) {
  py::dict d;
  d["N"] = r.N;
  d["Q"] = r.Q;
  d["d"] = r.d;
  d["k"] = r.k;
  d["s"] = r.s;
  d["J"] = r.J;
  d["measure"] = r.measure;
  d["measure_err"] = r.measure_err;
  d["measure_method"] = r.measure_method;
  d["sup_lb"] = r.sup_lb;
  d["hs_norm"] = r.hs_norm;
  d["ratio"] = r.ratio;
  d["wall_ms"] = r.wall_ms;
  d["witness_q"] = r.witness.q;
  d["witness_b"] = r.witness.b;
  d["witness_delta"] = r.witness.delta;
  d["failed"] = r.failed;
  d["message"] = r.message;
  return d;
}

ExperimentRow row_from(const py::dict& d) {
  ExperimentRow r;
  r.N = d["N"].cast<std::int64_t>();
  r.ratio = d["ratio"].cast<double>();
  if (d.contains("failed")) r.failed = d["failed"].cast<bool>();
  return r;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Weyl sums, divergence sets and maximal-function ratios on the torus";
  m.attr("__version__") = WEYLMAX_VERSION;

  static PyObject* error_type = PyErr_NewException("weylmax._core.WeylmaxError", PyExc_ValueError, nullptr);
  m.attr("WeylmaxError") = py::handle(error_type);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(error_type, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  py::class_<IntPolynomial>(m, "Polynomial")
      .def_static("parse", &parse_polynomial, py::arg("text"))
      .def_static("diagonal", &family_diagonal, py::arg("d"), py::arg("k"))
      .def_static("power_laplacian", &family_power_laplacian, py::arg("d"), py::arg("k"))
      .def_property_readonly("dim", &IntPolynomial::dim)
      .def_property_readonly("degree", &IntPolynomial::degree)
      .def("evaluate", [](const IntPolynomial& p, const std::vector<std::int64_t>& n) { return p.evaluate(n); })
      .def("to_json", &serialize_polynomial)
      .def("__str__", [](const IntPolynomial& p) { return to_string(p); })
      .def("__repr__", [](const IntPolynomial& p) { return "Polynomial(" + to_string(p) + ")"; });

  m.def("primes_in_band", [](std::int64_t lo, std::int64_t hi) { return primes_in_band(lo, hi).primes; },
        py::arg("lo"), py::arg("hi"));
  m.def("lattice_pair_count", &lattice_pair_count, py::arg("q"), py::arg("q2"), py::arg("A"));

  m.def(
      "weyl_table",
      [](const IntPolynomial& p, std::int64_t q, const std::string& method) {
        const WeylTable t = weyl_table(p, q, method == "direct" ? BuildMethod::direct : BuildMethod::dft);
        std::vector<py::ssize_t> shape(t.d, static_cast<py::ssize_t>(q));
        py::array_t<std::complex<double>> out(shape);
        std::copy(t.values.begin(), t.values.end(), out.mutable_data());
        return out;
      },
      py::arg("p"), py::arg("q"), py::arg("method") = "dft", "S(b) for every b in F_q^d as an array of shape (q,)*d");
  m.def(
      "verify_deligne",
      [](const IntPolynomial& p, std::int64_t q) {
        const WeylTable t = weyl_table(p, q);
        py::dict d = deligne_dict(deligne_check(t, p.degree()));
        d["parseval_defect"] = parseval_defect(t);
        return d;
      },
      py::arg("p"), py::arg("q"));
  m.def(
      "good_set",
      [](const IntPolynomial& p, std::int64_t q, double c) {
        const GoodSet g = good_set(weyl_table(p, q), c, p.degree());
        py::dict d;
        d["members"] = g.members;
        d["density"] = g.density;
        d["guaranteed_density"] = guaranteed_density(c, p.degree());
        return d;
      },
      py::arg("p"), py::arg("q"), py::arg("c") = 0.5);

  m.def("bump", &bump, py::arg("x"));
  m.def(
      "evaluate_solution",
      [](const IntPolynomial& p, std::int64_t N, std::int64_t q, const std::vector<std::int64_t>& b,
         std::vector<double> delta, unsigned threads) {
        const Datum f = datum_coefficients(N, p.dim());
        py::gil_scoped_release release;
        return evaluate_solution(p, f, {b, q, std::move(delta)}, {threads});
      },
      py::arg("p"), py::arg("N"), py::arg("q"), py::arg("b"), py::arg("delta") = std::vector<double>{},
      py::arg("threads") = 1, "e^{itP(D)} f_N at x = b/q + delta, t = 1/q, with exact phases");
  m.def("sobolev_norm", [](std::int64_t N, std::size_t d, double s) {
    return std::sqrt(sobolev_norm_sq(datum_coefficients(N, d), s));
  }, py::arg("N"), py::arg("d"), py::arg("s"));
  m.def(
      "decompose",
      [](const IntPolynomial& p, std::int64_t N, std::int64_t q, const std::vector<std::int64_t>& b,
         std::vector<double> delta) {
        const Datum f = datum_coefficients(N, p.dim());
        const MainError me = main_error_split(p, f, {b, q, std::move(delta)}, weyl_table(p, q));
        py::dict d;
        d["main"] = me.main;
        d["error"] = me.error;
        d["zhat0"] = me.zhat0;
        d["direct"] = me.direct;
        d["ratio"] = me.ratio();
        return d;
      },
      py::arg("p"), py::arg("N"), py::arg("q"), py::arg("b"), py::arg("delta") = std::vector<double>{});

  m.def("coupling_Q", &coupling_Q, py::arg("N"), py::arg("d"));
  m.def(
      "build_divergence_set",
      [](const IntPolynomial& p, std::int64_t N, double c, double rho, unsigned threads) {
        const DivergenceSet x = build_divergence_set(p, N, c, rho, {threads});
        py::dict d;
        d["N"] = x.N;
        d["Q"] = x.Q;
        d["J"] = x.J();
        py::list balls;
        for (const Ball& b : x.balls) balls.append(py::make_tuple(b.q, b.b));
        d["balls"] = balls;
        d["dropped"] = x.dropped;
        return d;
      },
      py::arg("p"), py::arg("N"), py::arg("c") = 0.5, py::arg("rho") = 1.0 / 32.0, py::arg("threads") = 1);
  m.def(
      "measure",
      [](std::int64_t N, std::size_t d, double rho, const std::vector<std::pair<std::int64_t, std::vector<std::int64_t>>>& balls,
         const std::string& method, std::uint64_t samples, std::uint64_t seed) {
        std::vector<Ball> list;
        for (const auto& [q, b] : balls) list.push_back({q, b});
        const DivergenceSet x = divergence_set_from_balls(N, d, rho, std::move(list));
        const MeasureResult r =
            measure(x, method == "exact" ? MeasureMethod::exact() : MeasureMethod::montecarlo(samples, seed));
        py::dict out;
        out["method"] = r.method;
        out["estimate"] = r.estimate;
        out["stderr"] = r.error;
        out["upper_bound"] = r.upper_bound;
        out["lower_bound"] = r.lower_bound;
        out["J"] = r.J;
        out["overlap_pairs"] = r.overlap_pairs;
        out["low_sample_warning"] = r.low_sample_warning;
        return out;
      },
      py::arg("N"), py::arg("d"), py::arg("rho"), py::arg("balls"), py::arg("method") = "exact",
      py::arg("samples") = 100000, py::arg("seed") = 0);

  m.def(
      "ratio_experiment",
      [](const IntPolynomial& p, double s, const std::vector<std::int64_t>& ladder, std::uint64_t seed,
         std::uint64_t sample_budget, unsigned threads) {
        ExperimentConfig cfg;
        cfg.seed = seed;
        cfg.sample_budget = sample_budget;
        cfg.threads = threads;
        std::vector<ExperimentRow> rows;
        {
          py::gil_scoped_release release;
          rows = ratio_experiment(p, s, ladder, cfg);
        }
        py::list out;
        for (const ExperimentRow& r : rows) out.append(row_dict(r));
        return out;
      },
      py::arg("p"), py::arg("s"), py::arg("ladder"), py::arg("seed") = 42, py::arg("sample_budget") = 8192,
      py::arg("threads") = 1);
  m.def(
      "fit_exponent",
      [](const py::list& rows) {
        std::vector<ExperimentRow> in;
        for (const auto& r : rows) in.push_back(row_from(r.cast<py::dict>()));
        const FitResult f = fit_exponent(in);
        py::dict d;
        d["slope"] = f.slope;
        d["intercept"] = f.intercept;
        d["residual"] = f.residual;
        d["n_points"] = f.n_points;
        d["log_corrected_slope"] = f.log_corrected_slope;
        return d;
      },
      py::arg("rows"));

  m.def("selftest", [] {
    py::list out;
    for (const SelftestCase& c : run_selftest()) out.append(py::make_tuple(c.name, c.ok, c.detail));
    return out;
  });
}
