#include "weylmax/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "weylmax/errors.hpp"
#include "weylmax/parallel.hpp"

namespace weylmax {

namespace {

std::vector<std::uint64_t> pick_balls(std::uint64_t J, std::uint64_t budget, std::uint64_t seed) {
  std::vector<std::uint64_t> idx(J);
  std::iota(idx.begin(), idx.end(), std::uint64_t{0});
  if (J <= budget) return idx;
  std::mt19937_64 rng(splitmix64(seed));
  for (std::uint64_t i = 0; i < budget; ++i) {
    std::uniform_int_distribution<std::uint64_t> pick(i, J - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(budget);
  std::sort(idx.begin(), idx.end());
  return idx;
}

double quantile(const std::vector<double>& sorted, double p) {
  const auto n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(p * n));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

struct LinearFit {
  double slope, intercept, rms;
};

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  require(sxx > 0, ErrorKind::insufficient_data, "fit needs at least two distinct N");
  LinearFit fit{sxy / sxx, 0, 0};
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += r * r;
  }
  fit.rms = std::sqrt(ss / n);
  return fit;
}

}  // namespace

ScanResult solution_scan(const IntPolynomial& p, const Datum& f, const DivergenceSet& x,
                         ScanOptions opts) {
  require(!x.balls.empty(), ErrorKind::input, "divergence set is empty");
  require(x.N == f.N() && x.d == f.d(), ErrorKind::input, "datum and divergence set disagree on N or d");
  require(p.dim() == f.d(), ErrorKind::input, "polynomial dimension does not match the datum");
  require(opts.sample_budget >= 1, ErrorKind::input, "sample budget must be positive");

  const auto chosen = pick_balls(x.J(), opts.sample_budget, opts.seed);
  const double budget = x.rho / (static_cast<double>(x.d) * static_cast<double>(x.N));
  std::vector<Witness> per_ball(chosen.size());
  parallel_chunks(chosen.size(), opts.threads, [&](std::uint64_t i) {
    const Ball& ball = x.balls[chosen[i]];
    std::mt19937_64 rng(splitmix64(opts.seed ^ splitmix64(chosen[i] + 1)));
    std::uniform_real_distribution<double> unif(-budget, budget);
    RationalPoint pt{ball.b, ball.q, std::vector<double>(x.d, 0.0)};
    const double at_center = std::abs(evaluate_solution(p, f, pt));
    for (double& v : pt.delta) v = unif(rng);
    const double at_delta = std::abs(evaluate_solution(p, f, pt));
    Witness& w = per_ball[i];
    w.q = ball.q;
    w.b = ball.b;
    if (at_delta < at_center) {
      w.delta = pt.delta;
      w.value = at_delta;
    } else {
      w.delta.assign(x.d, 0.0);
      w.value = at_center;
    }
  });

  ScanResult out;
  out.evaluated = per_ball.size();
  std::vector<double> values;
  values.reserve(per_ball.size());
  std::size_t arg_min = 0;
  for (std::size_t i = 0; i < per_ball.size(); ++i) {
    values.push_back(per_ball[i].value);
    if (per_ball[i].value < per_ball[arg_min].value) arg_min = i;
  }
  out.witness = per_ball[arg_min];
  out.sup_lb = out.witness.value;
  std::sort(values.begin(), values.end());
  out.max = values.back();
  for (double pq : kScanQuantiles) out.quantiles.push_back(quantile(values, pq));
  return out;
}

std::vector<ExperimentRow> ratio_experiment(const IntPolynomial& p, double s,
                                            const std::vector<std::int64_t>& ladder,
                                            const ExperimentConfig& config) {
  require(!ladder.empty(), ErrorKind::input, "N ladder is empty");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    require(ladder[i] >= 256, ErrorKind::input, "every N in the ladder must be >= 256");
    require(i == 0 || ladder[i] > ladder[i - 1], ErrorKind::input, "N ladder must be strictly ascending");
  }
  require(s >= 0 && std::isfinite(s), ErrorKind::input, "s must be a finite non-negative real");

  std::vector<ExperimentRow> rows;
  for (std::int64_t N : ladder) {
    const auto start = std::chrono::steady_clock::now();
    ExperimentRow row;
    row.N = N;
    row.d = p.dim();
    row.k = p.degree();
    row.s = s;
    try {
      row.Q = coupling_Q(N, row.d);
      const Datum f = datum_coefficients(N, row.d);
      const DivergenceSet x = build_divergence_set(p, N, config.c, config.rho, {config.threads});
      row.J = x.J();
      if (row.d == 1) {
        const MeasureResult m = measure(x, MeasureMethod::exact());
        row.measure = m.estimate;
        row.measure_method = m.method;
      } else {
        const MeasureResult m =
            measure(x, MeasureMethod::montecarlo(config.mc_samples, config.seed, config.threads));
        row.measure = m.estimate - 2.0 * m.error;
        row.measure_err = m.error;
        row.measure_method = "montecarlo-2se";
      }
      const ScanResult scan =
          solution_scan(p, f, x, {config.sample_budget, config.seed, config.threads});
      row.sup_lb = scan.sup_lb;
      row.witness = scan.witness;
      row.hs_norm = std::sqrt(sobolev_norm_sq(f, s));
      if (row.measure > 0) {
        row.ratio = row.sup_lb * std::sqrt(row.measure) / row.hs_norm;
      } else {
        row.failed = true;
        row.message = "measure lower bound is not positive";
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::resource) throw;
      row.failed = true;
      row.message = e.what();
    }
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    rows.push_back(std::move(row));
  }
  return rows;
}

FitResult fit_exponent(const std::vector<ExperimentRow>& rows) {
  std::vector<double> x, y, y_corrected;
  for (const ExperimentRow& r : rows) {
    if (r.failed || !(r.ratio > 0) || !std::isfinite(r.ratio) || r.N < 3) continue;
    const double ln_n = std::log(static_cast<double>(r.N));
    x.push_back(ln_n);
    y.push_back(std::log(r.ratio));
    y_corrected.push_back(std::log(r.ratio) + 0.5 * std::log(ln_n));
  }
  require(x.size() >= 3, ErrorKind::insufficient_data,
          "fit needs at least 3 successful rows, got " + std::to_string(x.size()));
  const LinearFit plain = least_squares(x, y);
  const LinearFit corrected = least_squares(x, y_corrected);
  return {plain.slope, plain.intercept, plain.rms, x.size(), corrected.slope};
}

}  // namespace weylmax
