#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace weylmax {

using Exponents = std::vector<std::uint32_t>;

/// Integer polynomial in `dim` variables, stored as a sparse map from dense
/// exponent vectors to non-zero coefficients.
class IntPolynomial {
 public:
  using TermMap = std::map<Exponents, std::int64_t>;

  explicit IntPolynomial(std::size_t dim);
  IntPolynomial(std::size_t dim, const TermMap& terms);

  std::size_t dim() const noexcept { return dim_; }
  const TermMap& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

  /// Adds `coeff` to the coefficient of `e`; a resulting zero is erased.
  void add_term(const Exponents& e, std::int64_t coeff);

  /// Maximum total degree; 0 for the empty polynomial.
  unsigned degree() const noexcept;

  /// Exact value at an integer point. Throws on int64 overflow.
  std::int64_t evaluate(std::span<const std::int64_t> n) const;

  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

 private:
  std::size_t dim_;
  TermMap terms_;
};

unsigned degree(const IntPolynomial& p);
unsigned total_degree(const Exponents& e);

/// Terms of maximal total degree.
IntPolynomial homogeneous_part(const IntPolynomial& p);

/// (X_1^2 + ... + X_d^2)^k, expanded.
IntPolynomial family_power_laplacian(std::size_t d, unsigned k);

/// X_1^k + ... + X_d^k.
IntPolynomial family_diagonal(std::size_t d, unsigned k);

/// Parses {"d": int, "terms": [{"e": [...], "c": int}, ...]}. Repeated
/// exponents accumulate; zero coefficients are dropped.
IntPolynomial parse_polynomial(std::string_view text);

/// Canonical JSON form (terms in ascending exponent order).
std::string serialize_polynomial(const IntPolynomial& p);

/// Human-readable form such as "X1^3 + X2^3".
std::string to_string(const IntPolynomial& p);

}  // namespace weylmax
