#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "weylmax/decomp.hpp"
#include "weylmax/divset.hpp"
#include "weylmax/numtheory.hpp"
#include "weylmax/errors.hpp"

using namespace weylmax;

TEST_CASE("fold, spectrum and inverse") {
  const Datum f = datum_coefficients(256, 1);
  const double delta[] = {2e-4};
  const FoldedZ z = fold(f, 13, delta);
  CHECK(inversion_defect(z.grid) < 1e-13);
  // Z(r) collects zeta(n) for n = r mod q.
  for (std::int64_t r = 0; r < 13; ++r) {
    cplx want = 0;
    for (std::int64_t n = f.lo(); n <= f.hi(); ++n)
      if (n % 13 == r) want += oracle::bump(double(n) / 256) * std::polar(1.0, 2 * std::numbers::pi * 2e-4 * n);
    CHECK(std::abs(z.grid.values[r] - want) < 1e-11);
  }
  const SpectralZ s = spectrum(z);
  CHECK(std::abs(s.hat.values[0] - zhat_zero(f, 13, delta)) < 1e-12);
  CHECK_THROWS_AS(fold(f, 64, delta), Error);
}

TEST_CASE("solution through the fold and the main/error split") {
  std::mt19937_64 rng(7);
  for (const IntPolynomial& p : {family_diagonal(1, 2), family_diagonal(1, 3), family_diagonal(2, 2)}) {
    const std::size_t d = p.dim();
    const std::int64_t N = d == 1 ? 512 : 64;
    const std::int64_t q = d == 1 ? 37 : 11;
    const Datum f = datum_coefficients(N, d);
    const WeylTable t = weyl_table(p, q);
    for (int trial = 0; trial < 5; ++trial) {
      RationalPoint pt{std::vector<std::int64_t>(d), q, std::vector<double>(d)};
      for (auto& b : pt.b) b = std::uniform_int_distribution<std::int64_t>(0, q - 1)(rng);
      for (auto& x : pt.delta) x = std::uniform_real_distribution<double>(-1, 1)(rng) / (32.0 * d * N);
      const MainError me = main_error_split(p, f, pt, t);
      CHECK(std::abs(me.direct - oracle::solution(p, N, q, pt.b, pt.delta)) < 1e-10 * std::abs(me.direct));
      const FoldedZ z = fold(f, q, pt.delta);
      CHECK(std::abs(fold_and_sum(p, z, pt.b) - me.direct) < 1e-10 * std::abs(me.direct));
      const cplx spectral = error_term_spectral(spectrum(z), t, pt.b);
      CHECK(std::abs(me.main + spectral - me.direct) < 1e-10 * std::abs(me.direct));
      CHECK(std::abs(me.main - me.zhat0 * t.at(pt.b)) < 1e-12 * std::abs(me.main));
    }
  }
}

TEST_CASE("Laplacian eigenrelation and summation by parts") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss;
  for (auto [q, d] : {std::pair<std::int64_t, std::size_t>{5, 1}, {17, 1}, {7, 2}, {5, 3}}) {
    ResidueGrid g{q, d, std::vector<cplx>(static_cast<std::size_t>(std::pow(q, d)))};
    ResidueGrid h = g;
    for (auto& v : g.values) v = {gauss(rng), gauss(rng)};
    for (auto& v : h.values) v = {gauss(rng), gauss(rng)};
    CHECK(sbp_check(g, h) < 1e-10);
    oracle::each_point(q, d, [&](const std::vector<std::int64_t>& l) {
      ResidueGrid wave{q, d, std::vector<cplx>(g.values.size())};
      std::size_t i = 0;
      oracle::each_point(q, d, [&](const std::vector<std::int64_t>& r) {
        std::int64_t dot = 0;
        for (std::size_t j = 0; j < d; ++j) dot += r[j] * l[j];
        wave.values[i++] = oracle::e_frac(dot, q);
      });
      const ResidueGrid lap = discrete_laplacian(wave);
      const double a = laplacian_symbol(l, q);
      for (std::size_t j = 0; j < wave.values.size(); ++j) CHECK(std::abs(lap.values[j] - a * wave.values[j]) < 1e-10);
    });
  }
  ResidueGrid g{5, 2, std::vector<cplx>(25, 1.0)};
  CHECK(std::abs(discrete_laplacian(g, 1).values[3]) < 1e-15);
  CHECK_THROWS_AS(discrete_laplacian(g, 2), Error);
}

TEST_CASE("spectrum of closed-form grids") {
  ResidueGrid one{7, 2, std::vector<cplx>(49, 1.0)};
  const SpectralZ s = spectrum(one);
  CHECK(std::abs(s.hat.values[0] - 1.0) < 1e-14);
  for (std::size_t i = 1; i < 49; ++i) CHECK(std::abs(s.hat.values[i]) < 1e-14);
  ResidueGrid wave{11, 1, std::vector<cplx>(11)};
  for (std::int64_t r = 0; r < 11; ++r) wave.values[r] = oracle::e_frac(3 * r, 11);
  const SpectralZ w = spectrum(wave);
  for (std::int64_t l = 0; l < 11; ++l) CHECK(std::abs(w.hat.values[l] - (l == 3 ? 1.0 : 0.0)) < 1e-14);
}

TEST_CASE("fold mass, term bound, zero mode scaling and decay") {
  const Datum f = datum_coefficients(64, 1);
  const FoldedZ z = fold(f, 5, {});
  double mass = 0;
  for (double v : f.profile()) mass += v;
  cplx total = 0;
  for (const cplx& v : z.grid.values) {
    CHECK(v.real() > 0);
    CHECK(std::abs(v.imag()) < 1e-15);
    CHECK(std::abs(v) <= std::ceil(1.75 * 64 / 5));
    total += v;
  }
  CHECK(std::abs(total - mass) < 1e-12);
  for (std::size_t d : {1u, 2u}) {
    const std::int64_t N = d == 1 ? 1024 : 256;
    for (std::int64_t q : {5, 13}) {
      const Datum g = datum_coefficients(N, d);
      const cplx z0 = zhat_zero(g, q, {});
      CHECK(std::abs(z0) * std::pow(double(q) / N, d) == doctest::Approx(std::pow(1.125, d)).epsilon(0.1));
    }
  }
  const SpectralZ s = spectrum(fold(datum_coefficients(256, 1), 17, {}));
  for (std::int64_t l = 1; l < 17; ++l) CHECK(std::abs(s.hat.values[l]) <= std::abs(s.hat.values[0]));
  for (std::int64_t l = 1; l < 8; ++l) CHECK(std::abs(s.hat.values[l + 1]) <= std::abs(s.hat.values[l]) + 1e-12);
}

TEST_CASE("error ratio shrinks with N along the coupling") {
  const IntPolynomial p = family_diagonal(1, 2);
  double previous = 1e300;
  for (std::int64_t N : {1 << 10, 1 << 12, 1 << 14}) {
    const Datum f = datum_coefficients(N, 1);
    const std::int64_t Q = coupling_Q(N, 1);
    double worst = 0;
    for (std::int64_t q : primes_in_band(Q, 2 * Q).primes) {
      const WeylTable t = weyl_table(p, q);
      for (std::int64_t b = 0; b < q; b += 3) worst = std::max(worst, main_error_split(p, f, {{b}, q, {}}, t).ratio());
    }
    CHECK(worst < previous);
    CHECK(worst <= 0.5);
    previous = worst;
  }
}
