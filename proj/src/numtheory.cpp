#include "weylmax/numtheory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "weylmax/errors.hpp"

namespace weylmax {

namespace {

constexpr std::int64_t kSieveSegment = 1 << 15;
constexpr std::int64_t kMaxBandHi = std::int64_t{1} << 40;

std::vector<std::int64_t> simple_sieve(std::int64_t limit) {
  std::vector<bool> composite(static_cast<std::size_t>(limit + 1), false);
  std::vector<std::int64_t> primes;
  for (std::int64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (std::int64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

}  // namespace

PrimeBand primes_in_band(std::int64_t lo, std::int64_t hi) {
  require(lo >= 2 && lo < hi, ErrorKind::input,
          "invalid prime band [" + std::to_string(lo) + ", " + std::to_string(hi) + ")");
  require(hi <= kMaxBandHi, ErrorKind::input, "prime band upper end too large");
  PrimeBand band{lo, hi, {}};
  const auto root = static_cast<std::int64_t>(std::sqrt(static_cast<double>(hi))) + 1;
  const auto base = simple_sieve(root);

  std::vector<char> composite;
  for (std::int64_t seg_lo = lo; seg_lo < hi; seg_lo += kSieveSegment) {
    const std::int64_t seg_hi = std::min(seg_lo + kSieveSegment, hi);
    composite.assign(static_cast<std::size_t>(seg_hi - seg_lo), 0);
    for (std::int64_t p : base) {
      if (p * p >= seg_hi) break;
      std::int64_t start = std::max(p * p, ceil_div(seg_lo, p) * p);
      for (std::int64_t j = start; j < seg_hi; j += p) composite[j - seg_lo] = 1;
    }
    for (std::int64_t n = seg_lo; n < seg_hi; ++n)
      if (!composite[n - seg_lo]) band.primes.push_back(n);
  }
  return band;
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

std::uint64_t reduce_mod(std::int64_t a, std::uint64_t m) {
  if (a >= 0) return static_cast<std::uint64_t>(a) % m;
  // -(a + 1) avoids negating INT64_MIN.
  const std::uint64_t r = static_cast<std::uint64_t>(-(a + 1)) % m;
  return m - 1 - r;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  // This witness set is exact below 3.3e24.
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::int64_t gcd(std::int64_t a, std::int64_t b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b != 0) {
    const std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  require(m >= 1, ErrorKind::input, "modulus must be positive");
  if (m == 1) return 0;
  std::int64_t old_r = static_cast<std::int64_t>(reduce_mod(a, static_cast<std::uint64_t>(m)));
  std::int64_t r = m, old_s = 1, s = 0;
  while (r != 0) {
    const std::int64_t quot = old_r / r;
    std::int64_t t = old_r - quot * r;
    old_r = r;
    r = t;
    t = old_s - quot * s;
    old_s = s;
    s = t;
  }
  require(old_r == 1, ErrorKind::input, "no modular inverse");
  return static_cast<std::int64_t>(reduce_mod(old_s, static_cast<std::uint64_t>(m)));
}

std::uint64_t eval_poly_mod(const IntPolynomial& p, std::span<const std::int64_t> n,
                            std::uint64_t q) {
  require(n.size() == p.dim(), ErrorKind::input,
          "point dimension " + std::to_string(n.size()) + " does not match polynomial dimension " +
              std::to_string(p.dim()));
  require(q >= 2, ErrorKind::input, "modulus must be >= 2");
  std::vector<std::uint64_t> base(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) base[i] = reduce_mod(n[i], q);
  std::uint64_t total = 0;
  for (const auto& [e, c] : p.terms()) {
    std::uint64_t term = reduce_mod(c, q);
    for (std::size_t i = 0; i < e.size() && term != 0; ++i)
      if (e[i] != 0) term = mul_mod(term, pow_mod(base[i], e[i], q), q);
    total += term;
    if (total >= q) total -= q;
  }
  return total;
}

void for_each_line_point(std::int64_t q, std::int64_t q2, std::int64_t D, std::int64_t b_lo,
                         std::int64_t b_hi, std::int64_t b2_lo, std::int64_t b2_hi,
                         const std::function<void(std::int64_t, std::int64_t)>& visit) {
  require(q >= 1 && q2 >= 1, ErrorKind::input, "line moduli must be positive");
  const std::int64_t g = gcd(q, q2);
  if (D % g != 0) return;
  const std::int64_t m = q / g;
  const std::int64_t m2 = q2 / g;
  // b m2 = D/g (mod m) fixes b modulo m.
  const std::int64_t residue = static_cast<std::int64_t>(mul_mod(
      reduce_mod(D / g, static_cast<std::uint64_t>(m)),
      static_cast<std::uint64_t>(inverse_mod(m2, m)), static_cast<std::uint64_t>(m)));
  // b' = (b q2 - D) / q is increasing in b, so the b' window is a b window.
  const std::int64_t lo = std::max(b_lo, ceil_div(b2_lo * q + D, q2));
  const std::int64_t hi = std::min(b_hi, floor_div(b2_hi * q + D, q2));
  if (lo > hi) return;
  std::int64_t b = lo + static_cast<std::int64_t>(reduce_mod(residue - lo, static_cast<std::uint64_t>(m)));
  for (; b <= hi; b += m) visit(b, (b * q2 - D) / q);
}

std::int64_t lattice_pair_count(std::int64_t q, std::int64_t q2, double A) {
  require(q >= 1 && q2 >= 1, ErrorKind::input, "lattice_pair_count needs q, q' >= 1");
  require(A >= 0 && std::isfinite(A), ErrorKind::input, "A must be a finite non-negative real");
  // |b q' - b' q| < q q' on the box, so larger A changes nothing.
  const auto cap = static_cast<double>(q) * static_cast<double>(q2);
  const auto a_max = static_cast<std::int64_t>(std::floor(std::min(A, cap)));
  const std::int64_t g = gcd(q, q2);
  std::int64_t count = 0;
  auto tally = [&count](std::int64_t, std::int64_t) { ++count; };
  for (std::int64_t j = 1; j * g <= a_max; ++j) {
    for_each_line_point(q, q2, j * g, 1, q, 1, q2, tally);
    for_each_line_point(q, q2, -j * g, 1, q, 1, q2, tally);
  }
  return count;
}

std::int64_t lattice_pair_count_brute(std::int64_t q, std::int64_t q2, double A) {
  require(q >= 1 && q2 >= 1, ErrorKind::input, "lattice_pair_count needs q, q' >= 1");
  require(A >= 0, ErrorKind::input, "A must be non-negative");
  std::int64_t count = 0;
  for (std::int64_t b = 1; b <= q; ++b)
    for (std::int64_t b2 = 1; b2 <= q2; ++b2) {
      const std::int64_t diff = b * q2 - b2 * q;
      const std::int64_t mag = diff < 0 ? -diff : diff;
      if (mag > 0 && static_cast<double>(mag) <= A) ++count;
    }
  return count;
}

}  // namespace weylmax
