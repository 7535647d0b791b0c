#include "doctest.h"
#include "oracles.hpp"
#include "weylmax/errors.hpp"
#include "weylmax/numtheory.hpp"

using namespace weylmax;

TEST_CASE("sieve agrees with trial division") {
  for (auto [lo, hi] : {std::pair<std::int64_t, std::int64_t>{2, 3}, {2, 1000}, {64, 128}, {997, 5003},
                        {32760, 32800}, {1000000, 1001000}})
    CHECK(primes_in_band(lo, hi).primes == oracle::primes_trial(lo, hi));
  CHECK(primes_in_band(2, 30).primes.size() == 10);
  CHECK(primes_in_band(64, 128).primes.size() == 13);
  CHECK(primes_in_band(24, 29).primes.empty());
}

TEST_CASE("sieve spans several segments") {
  const auto band = primes_in_band(2, 200000);
  CHECK(band.primes.size() == 17984);
  CHECK(band.primes.back() == 199999);
}

TEST_CASE("bad band is an input error") {
  CHECK_THROWS_AS(primes_in_band(1, 10), Error);
  CHECK_THROWS_AS(primes_in_band(10, 10), Error);
}

TEST_CASE("Miller-Rabin") {
  for (std::int64_t n = 0; n < 5000; ++n) CHECK(is_prime(static_cast<std::uint64_t>(n)) == oracle::is_prime_trial(n));
  CHECK(is_prime(18446744073709551557ULL));
  CHECK_FALSE(is_prime(3215031751ULL));  // strong pseudoprime to 2, 3, 5, 7
  CHECK_FALSE(is_prime(18446744073709551615ULL));
}

TEST_CASE("modular helpers") {
  CHECK(reduce_mod(-1, 7) == 6);
  CHECK(reduce_mod(-14, 7) == 0);
  CHECK(mul_mod(~0ULL, ~0ULL, 1000000007ULL) == (static_cast<unsigned __int128>(~0ULL) * ~0ULL) % 1000000007ULL);
  CHECK(pow_mod(3, 1000000006, 1000000007) == 1);
  CHECK(gcd(84, -36) == 12);
  for (std::int64_t a = 1; a < 13; ++a) CHECK((a * inverse_mod(a, 13)) % 13 == 1);
}

TEST_CASE("polynomial values mod q never overflow") {
  IntPolynomial p(1);
  p.add_term({7}, 3);
  p.add_term({1}, -5);
  const std::int64_t big[] = {std::int64_t{1} << 40};
  std::uint64_t expect = (3 * pow_mod(reduce_mod(big[0], 101), 7, 101) + 101 * 101 - 5 * reduce_mod(big[0], 101)) % 101;
  CHECK(eval_poly_mod(p, big, 101) == expect);
  for (std::int64_t n = -50; n <= 50; ++n) {
    const std::int64_t pt[] = {n};
    CHECK(eval_poly_mod(p, pt, 13) == static_cast<std::uint64_t>(oracle::mod(p.evaluate(pt), 13)));
  }
  const std::int64_t wrong[] = {1, 2};
  CHECK_THROWS_AS(eval_poly_mod(p, wrong, 13), Error);
}

TEST_CASE("lattice count matches brute force and the 2A bound") {
  CHECK(lattice_pair_count(3, 5, 2.0) == 4);
  for (std::int64_t q = 1; q <= 40; ++q)
    for (std::int64_t q2 = 1; q2 <= 40; ++q2)
      for (double A : {0.0, 0.5, 1.0, 2.0, 3.5, 10.0, 2000.0}) {
        const auto fast = lattice_pair_count(q, q2, A);
        CHECK(fast == lattice_pair_count_brute(q, q2, A));
        CHECK(static_cast<double>(fast) <= 2 * A);
      }
}

TEST_CASE("line walk visits exactly the line points") {
  std::int64_t hits = 0;
  for_each_line_point(6, 4, 2, 0, 5, 0, 3, [&](std::int64_t b, std::int64_t b2) {
    CHECK(b * 4 - b2 * 6 == 2);
    ++hits;
  });
  std::int64_t expect = 0;
  for (std::int64_t b = 0; b <= 5; ++b)
    for (std::int64_t b2 = 0; b2 <= 3; ++b2) expect += b * 4 - b2 * 6 == 2;
  CHECK(hits == expect);
}
