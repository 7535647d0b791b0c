#include "weylmax/divset.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>

#include "weylmax/errors.hpp"
#include "weylmax/parallel.hpp"

namespace weylmax {

namespace {

constexpr std::uint64_t kMonteCarloBlock = 4096;

unsigned __int128 ipow(std::int64_t base, std::size_t e) {
  unsigned __int128 r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= static_cast<unsigned __int128>(base);
  return r;
}

// Members of G(q) for one prime, as a dense bitmap over F_q^d.
struct PrimeGroup {
  std::int64_t q = 0;
  std::vector<bool> member;
  std::uint64_t count = 0;
};

std::vector<PrimeGroup> group_by_prime(const DivergenceSet& x) {
  std::map<std::int64_t, PrimeGroup> groups;
  for (const Ball& ball : x.balls) {
    auto& g = groups[ball.q];
    const auto uq = static_cast<std::uint64_t>(ball.q);
    if (g.q == 0) {
      g.q = ball.q;
      const std::uint64_t cells = grid_size(uq, x.d, kWeylMemoryGuard);
      require(cells != 0, ErrorKind::resource, "q^d exceeds the residue table guard");
      g.member.assign(cells, false);
    }
    const std::uint64_t idx = flat_index(ball.b, uq);
    if (!g.member[idx]) {
      g.member[idx] = true;
      ++g.count;
    }
  }
  std::vector<PrimeGroup> out;
  for (auto& [q, g] : groups) out.push_back(std::move(g));
  return out;
}

double circle_distance(double a, double b) {
  double t = std::abs(a - b);
  t -= std::floor(t);
  return std::min(t, 1.0 - t);
}

}  // namespace

std::int64_t coupling_Q(std::int64_t N, std::size_t d) {
  require(N >= 1 && d >= 1 && d <= 3, ErrorKind::input, "coupling needs N >= 1 and 1 <= d <= 3");
  require(N < (std::int64_t{1} << 31), ErrorKind::input, "N too large");
  const unsigned __int128 target = ipow(N, d);
  auto fits = [&](std::int64_t Q) { return ipow(Q, d + 1) <= target; };
  auto Q = static_cast<std::int64_t>(std::pow(static_cast<double>(N),
                                              static_cast<double>(d) / static_cast<double>(d + 1)));
  while (Q > 0 && !fits(Q)) --Q;
  while (fits(Q + 1)) ++Q;
  return Q;
}

DivergenceSet build_divergence_set(const IntPolynomial& p, std::int64_t N, double c, double rho,
                                   BuildOptions opts) {
  require(c > 0.0 && c < 1.0, ErrorKind::input, "good-set threshold c must lie in (0, 1)");
  require(rho > 0.0 && rho < 0.5, ErrorKind::input, "rho must lie in (0, 1/2)");
  require(p.degree() >= 2, ErrorKind::input, "symbol must have degree >= 2");
  DivergenceSet x;
  x.N = N;
  x.d = p.dim();
  x.Q = coupling_Q(N, x.d);
  x.rho = rho;
  x.c = c;
  x.k = p.degree();
  require(x.Q >= 2, ErrorKind::config,
          "N = " + std::to_string(N) + " gives Q = " + std::to_string(x.Q) + " < 2");

  std::vector<std::int64_t> admissible;
  for (std::int64_t q : primes_in_band(x.Q, 2 * x.Q).primes) {
    if (x.k % q == 0)
      x.dropped.push_back(q);
    else
      admissible.push_back(q);
  }
  require(!admissible.empty(), ErrorKind::config,
          "no admissible prime in [" + std::to_string(x.Q) + ", " + std::to_string(2 * x.Q) + ")");

  std::vector<WeylSummary> summaries(admissible.size());
  parallel_chunks(admissible.size(), opts.threads,
                  [&](std::uint64_t i) { summaries[i] = summarize_weyl(p, admissible[i], c); });

  std::vector<std::int64_t> b(x.d);
  for (const WeylSummary& s : summaries) {
    x.per_prime.push_back({s.q, s.good.members.size(), s.good.density, s.deligne, s.parseval_defect});
    for (std::uint64_t flat : s.good.members) {
      unflatten(flat, static_cast<std::uint64_t>(s.q), b);
      x.balls.push_back({s.q, b});
    }
  }
  return x;
}

DivergenceSet divergence_set_from_balls(std::int64_t N, std::size_t d, double rho,
                                        std::vector<Ball> balls) {
  require(N >= 1 && d >= 1, ErrorKind::input, "invalid N or d");
  require(rho > 0.0 && rho < 0.5, ErrorKind::input, "rho must lie in (0, 1/2)");
  for (const Ball& ball : balls) {
    require(ball.b.size() == d, ErrorKind::input, "ball center has wrong dimension");
    require(ball.q >= 2, ErrorKind::input, "ball denominator must be >= 2");
    for (std::int64_t bi : ball.b)
      require(bi >= 0 && bi < ball.q, ErrorKind::input, "ball numerator outside [0, q)");
  }
  std::stable_sort(balls.begin(), balls.end(), [](const Ball& a, const Ball& b) { return a.q < b.q; });
  DivergenceSet x;
  x.N = N;
  x.d = d;
  x.Q = coupling_Q(N, d);
  x.rho = rho;
  x.balls = std::move(balls);
  return x;
}

std::vector<std::pair<std::int64_t, std::int64_t>> circle_close_pairs(std::int64_t q, std::int64_t q2,
                                                                      double reach) {
  require(q >= 1 && q2 >= 1 && reach >= 0.0, ErrorKind::input, "invalid circle pair query");
  const std::int64_t period = q * q2;
  // |x/q - y/q' - m| <= reach  <=>  |x q' - y q - m q q'| <= A.
  const double A = reach * static_cast<double>(q) * static_cast<double>(q2);
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  if (2.0 * A + 1.0 >= static_cast<double>(period)) {
    for (std::int64_t x = 0; x < q; ++x)
      for (std::int64_t y = 0; y < q2; ++y) {
        std::int64_t diff = (x * q2 - y * q) % period;
        if (diff < 0) diff += period;
        if (static_cast<double>(std::min(diff, period - diff)) <= A) out.emplace_back(x, y);
      }
    return out;
  }
  // Below half a period each admissible residue has one (D, m) representation.
  const auto a_max = static_cast<std::int64_t>(std::floor(A));
  auto keep = [&out](std::int64_t x, std::int64_t y) { out.emplace_back(x, y); };
  for (std::int64_t D = -a_max; D <= a_max; ++D)
    for (std::int64_t m : {-1, 0, 1})
      for_each_line_point(q, q2, D + m * period, 0, q - 1, 0, q2 - 1, keep);
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t overlap_pair_count(const DivergenceSet& x) {
  const auto groups = group_by_prime(x);
  const double reach = 2.0 * x.radius();
  const std::size_t d = x.d;
  std::uint64_t total = 0;
  for (std::size_t gi = 0; gi < groups.size(); ++gi)
    for (std::size_t gj = gi; gj < groups.size(); ++gj) {
      const PrimeGroup& a = groups[gi];
      const PrimeGroup& b = groups[gj];
      const auto close = circle_close_pairs(a.q, b.q, reach);
      if (close.empty()) continue;
      const auto qa = static_cast<std::uint64_t>(a.q);
      const auto qb = static_cast<std::uint64_t>(b.q);
      // Odometer over close^d: coordinate i takes candidate choice[i].
      std::vector<std::size_t> choice(d, 0);
      std::uint64_t ordered = 0;
      while (true) {
        std::uint64_t ia = 0, ib = 0;
        for (std::size_t i = 0; i < d; ++i) {
          ia = ia * qa + static_cast<std::uint64_t>(close[choice[i]].first);
          ib = ib * qb + static_cast<std::uint64_t>(close[choice[i]].second);
        }
        if (a.member[ia] && b.member[ib]) ++ordered;
        std::size_t i = d;
        while (i > 0 && ++choice[i - 1] == close.size()) choice[--i] = 0;
        if (i == 0) break;
      }
      // Same prime: ordered pairs count each off-diagonal pair twice.
      total += gi == gj ? (ordered + a.count) / 2 : ordered;
    }
  return total;
}

double circle_union_measure(std::vector<std::pair<double, double>> arcs) {
  std::vector<std::pair<double, double>> pieces;
  pieces.reserve(arcs.size() + 2);
  for (auto [center, half] : arcs) {
    if (half <= 0.0) continue;
    if (half >= 0.5) return 1.0;
    center -= std::floor(center);
    const double lo = center - half;
    const double hi = center + half;
    if (lo < 0.0) {
      pieces.emplace_back(lo + 1.0, 1.0);
      pieces.emplace_back(0.0, hi);
    } else if (hi > 1.0) {
      pieces.emplace_back(lo, 1.0);
      pieces.emplace_back(0.0, hi - 1.0);
    } else {
      pieces.emplace_back(lo, hi);
    }
  }
  std::sort(pieces.begin(), pieces.end());
  CompensatedSum total;
  double cur_lo = 0, cur_hi = -1;
  for (const auto& [lo, hi] : pieces) {
    if (lo > cur_hi) {
      if (cur_hi > cur_lo) total.add(cur_hi - cur_lo);
      cur_lo = lo;
      cur_hi = hi;
    } else {
      cur_hi = std::max(cur_hi, hi);
    }
  }
  if (cur_hi > cur_lo) total.add(cur_hi - cur_lo);
  return std::min(1.0, total.value());
}

MeasureResult measure(const DivergenceSet& x, MeasureMethod method) {
  MeasureResult out;
  out.J = x.J();
  out.overlap_pairs = overlap_pair_count(x);
  const double width = std::pow(2.0 * x.radius(), static_cast<double>(x.d));
  const double J = static_cast<double>(out.J);
  out.upper_bound = J * width;
  // (sum |B|)^2 <= |union| sum_{j,k} |B_j cap B_k|, each intersection <= |B|.
  const double ordered = 2.0 * static_cast<double>(out.overlap_pairs) - J;
  out.lower_bound = out.J == 0 ? 0.0 : J * J * width / ordered;

  if (method.kind == MeasureMethod::Kind::exact) {
    require(x.d == 1, ErrorKind::unsupported, "exact measure is only available for d = 1");
    out.method = "exact";
    std::vector<std::pair<double, double>> arcs;
    arcs.reserve(x.balls.size());
    for (const Ball& ball : x.balls)
      arcs.emplace_back(static_cast<double>(ball.b[0]) / static_cast<double>(ball.q), x.radius());
    out.estimate = circle_union_measure(std::move(arcs));
    return out;
  }

  require(method.samples >= 1, ErrorKind::input, "Monte Carlo needs at least one sample");
  out.method = "montecarlo";
  out.samples = method.samples;
  out.low_sample_warning = method.samples < kMinMonteCarloSamples;
  const auto groups = group_by_prime(x);
  const double radius = x.radius();
  const std::uint64_t blocks = (method.samples + kMonteCarloBlock - 1) / kMonteCarloBlock;
  std::vector<std::uint64_t> hits(blocks, 0);
  parallel_chunks(blocks, method.threads, [&](std::uint64_t blk) {
    std::mt19937_64 rng(splitmix64(method.seed ^ splitmix64(blk)));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const std::uint64_t n = std::min(kMonteCarloBlock, method.samples - blk * kMonteCarloBlock);
    std::vector<double> pt(x.d);
    std::uint64_t h = 0;
    for (std::uint64_t s = 0; s < n; ++s) {
      for (double& v : pt) v = unif(rng);
      for (const PrimeGroup& g : groups) {
        // radius < 1/(2q), so only the nearest residue can contain pt.
        const auto uq = static_cast<std::uint64_t>(g.q);
        std::uint64_t idx = 0;
        bool inside = true;
        for (double v : pt) {
          const auto nearest = static_cast<std::uint64_t>(std::llround(v * static_cast<double>(g.q))) % uq;
          if (circle_distance(v, static_cast<double>(nearest) / static_cast<double>(g.q)) > radius) {
            inside = false;
            break;
          }
          idx = idx * uq + nearest;
        }
        if (inside && g.member[idx]) {
          ++h;
          break;
        }
      }
    }
    hits[blk] = h;
  });
  std::uint64_t total_hits = 0;
  for (std::uint64_t h : hits) total_hits += h;
  const double n = static_cast<double>(method.samples);
  out.estimate = static_cast<double>(total_hits) / n;
  out.error = std::sqrt(out.estimate * (1.0 - out.estimate) / n);
  return out;
}

}  // namespace weylmax
