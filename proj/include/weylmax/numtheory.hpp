#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "weylmax/poly.hpp"

namespace weylmax {

/// Primes in the half-open band [lo, hi), ascending.
struct PrimeBand {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  std::vector<std::int64_t> primes;
};

/// Segmented sieve of Eratosthenes over [lo, hi). Requires 2 <= lo < hi.
PrimeBand primes_in_band(std::int64_t lo, std::int64_t hi);

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(std::uint64_t n);

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);
/// Representative of a in [0, m).
std::uint64_t reduce_mod(std::int64_t a, std::uint64_t m);
std::int64_t gcd(std::int64_t a, std::int64_t b);
/// Inverse of a modulo m; requires gcd(a, m) == 1.
std::int64_t inverse_mod(std::int64_t a, std::int64_t m);

/// P(n) mod q in [0, q). Every coefficient and power is reduced mod q with
/// 128-bit intermediates, so no overflow for any int64 input.
std::uint64_t eval_poly_mod(const IntPolynomial& p, std::span<const std::int64_t> n,
                            std::uint64_t q);

/// Visits the integer points (b, b') with b_lo <= b <= b_hi, b'_lo <= b' <= b'_hi
/// on the line b q' - b' q = D. Points on one line are spaced q/gcd(q,q') apart
/// in b, so the walk costs O(1 + (b_hi - b_lo) gcd / q).
void for_each_line_point(std::int64_t q, std::int64_t q2, std::int64_t D,
                         std::int64_t b_lo, std::int64_t b_hi, std::int64_t b2_lo,
                         std::int64_t b2_hi,
                         const std::function<void(std::int64_t, std::int64_t)>& visit);

/// Number of pairs 1 <= b <= q, 1 <= b' <= q' with 0 < |b q' - b' q| <= A.
/// Walks the lines b q' - b' q = j gcd(q, q'), 0 < |j| <= A / gcd: O(q + A).
std::int64_t lattice_pair_count(std::int64_t q, std::int64_t q2, double A);

/// Same count by scanning all q q' pairs.
std::int64_t lattice_pair_count_brute(std::int64_t q, std::int64_t q2, double A);

}  // namespace weylmax
