#include "weylmax/poly.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "weylmax/errors.hpp"

namespace weylmax {

IntPolynomial::IntPolynomial(std::size_t dim) : dim_(dim) {
  require(dim >= 1, ErrorKind::input, "polynomial dimension must be >= 1");
}

IntPolynomial::IntPolynomial(std::size_t dim, const TermMap& terms)
    : IntPolynomial(dim) {
  for (const auto& [e, c] : terms) add_term(e, c);
}

void IntPolynomial::add_term(const Exponents& e, std::int64_t coeff) {
  require(e.size() == dim_, ErrorKind::input,
          "exponent vector length " + std::to_string(e.size()) +
              " does not match dimension " + std::to_string(dim_));
  if (coeff == 0) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, coeff);
    return;
  }
  std::int64_t sum = 0;
  require(!__builtin_add_overflow(it->second, coeff, &sum), ErrorKind::input,
          "coefficient overflow");
  if (sum == 0)
    terms_.erase(it);
  else
    it->second = sum;
}

unsigned total_degree(const Exponents& e) {
  return std::accumulate(e.begin(), e.end(), 0u);
}

unsigned IntPolynomial::degree() const noexcept {
  unsigned k = 0;
  for (const auto& [e, c] : terms_) k = std::max(k, total_degree(e));
  return k;
}

std::int64_t IntPolynomial::evaluate(std::span<const std::int64_t> n) const {
  require(n.size() == dim_, ErrorKind::input, "evaluation point has wrong dimension");
  std::int64_t total = 0;
  for (const auto& [e, c] : terms_) {
    std::int64_t term = c;
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::uint32_t j = 0; j < e[i]; ++j)
        require(!__builtin_mul_overflow(term, n[i], &term), ErrorKind::input,
                "integer overflow in exact evaluation");
    require(!__builtin_add_overflow(total, term, &total), ErrorKind::input,
            "integer overflow in exact evaluation");
  }
  return total;
}

unsigned degree(const IntPolynomial& p) { return p.degree(); }

IntPolynomial homogeneous_part(const IntPolynomial& p) {
  require(!p.empty(), ErrorKind::input, "homogeneous part of the empty polynomial");
  const unsigned k = p.degree();
  IntPolynomial out(p.dim());
  for (const auto& [e, c] : p.terms())
    if (total_degree(e) == k) out.add_term(e, c);
  return out;
}

namespace {

// Visits every composition of `k` into `d` non-negative parts.
template <class Fn>
void for_each_composition(std::size_t d, unsigned k, Fn&& fn) {
  std::vector<unsigned> parts(d, 0);
  auto rec = [&](auto&& self, std::size_t i, unsigned left) -> void {
    if (i + 1 == d) {
      parts[i] = left;
      fn(parts);
      return;
    }
    for (unsigned j = 0; j <= left; ++j) {
      parts[i] = j;
      self(self, i + 1, left - j);
    }
  };
  rec(rec, 0, k);
}

std::int64_t multinomial(unsigned k, const std::vector<unsigned>& parts) {
  // Product of binomials C(k - used, part); each step is an exact integer.
  std::int64_t result = 1;
  unsigned used = 0;
  for (unsigned part : parts) {
    std::int64_t binom = 1;
    for (unsigned j = 1; j <= part; ++j) binom = binom * (k - used - part + j) / j;
    require(!__builtin_mul_overflow(result, binom, &result), ErrorKind::input,
            "multinomial coefficient overflow");
    used += part;
  }
  return result;
}

}  // namespace

IntPolynomial family_power_laplacian(std::size_t d, unsigned k) {
  require(d >= 1 && k >= 1, ErrorKind::input, "power Laplacian needs d >= 1 and k >= 1");
  IntPolynomial out(d);
  for_each_composition(d, k, [&](const std::vector<unsigned>& parts) {
    Exponents e(d);
    for (std::size_t i = 0; i < d; ++i) e[i] = 2 * parts[i];
    out.add_term(e, multinomial(k, parts));
  });
  return out;
}

IntPolynomial family_diagonal(std::size_t d, unsigned k) {
  require(d >= 1 && k >= 2, ErrorKind::input, "diagonal family needs d >= 1 and k >= 2");
  IntPolynomial out(d);
  for (std::size_t i = 0; i < d; ++i) {
    Exponents e(d, 0);
    e[i] = k;
    out.add_term(e, 1);
  }
  return out;
}

IntPolynomial parse_polynomial(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::parse, std::string("polynomial JSON at byte ") +
                               std::to_string(e.byte) + ": " + e.what());
  }
  auto bad = [](const std::string& where, const std::string& why) {
    fail(ErrorKind::parse, "polynomial JSON at " + where + ": " + why);
  };
  if (!doc.is_object()) bad("/", "expected an object");
  if (!doc.contains("d") || !doc["d"].is_number_integer()) bad("/d", "expected an integer");
  const auto d = doc["d"].get<std::int64_t>();
  if (d < 1) bad("/d", "dimension must be >= 1");
  if (!doc.contains("terms") || !doc["terms"].is_array()) bad("/terms", "expected an array");

  IntPolynomial p(static_cast<std::size_t>(d));
  const auto& terms = doc["terms"];
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const std::string at = "/terms/" + std::to_string(t);
    const auto& term = terms[t];
    if (!term.is_object()) bad(at, "expected an object");
    if (!term.contains("e") || !term["e"].is_array()) bad(at + "/e", "expected an array");
    if (!term.contains("c") || !term["c"].is_number_integer()) bad(at + "/c", "expected an integer");
    const auto& ev = term["e"];
    if (static_cast<std::int64_t>(ev.size()) != d)
      bad(at + "/e", "length " + std::to_string(ev.size()) + " does not match d = " +
                         std::to_string(d));
    Exponents e(ev.size());
    for (std::size_t i = 0; i < ev.size(); ++i) {
      const std::string ei = at + "/e/" + std::to_string(i);
      if (!ev[i].is_number_integer()) bad(ei, "expected an integer");
      const auto v = ev[i].get<std::int64_t>();
      if (v < 0) bad(ei, "negative exponent");
      if (v > 4096) bad(ei, "exponent too large");
      e[i] = static_cast<std::uint32_t>(v);
    }
    p.add_term(e, term["c"].get<std::int64_t>());
  }
  return p;
}

std::string serialize_polynomial(const IntPolynomial& p) {
  nlohmann::ordered_json doc;
  doc["d"] = p.dim();
  doc["terms"] = nlohmann::ordered_json::array();
  for (const auto& [e, c] : p.terms()) {
    nlohmann::ordered_json term;
    term["e"] = e;
    term["c"] = c;
    doc["terms"].push_back(term);
  }
  return doc.dump();
}

std::string to_string(const IntPolynomial& p) {
  if (p.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // Highest degree first reads naturally.
  std::vector<std::pair<Exponents, std::int64_t>> terms(p.terms().rbegin(), p.terms().rend());
  std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    return total_degree(a.first) > total_degree(b.first);
  });
  for (const auto& [e, c] : terms) {
    std::int64_t mag = c < 0 ? -c : c;
    if (first)
      os << (c < 0 ? "-" : "");
    else
      os << (c < 0 ? " - " : " + ");
    first = false;
    const bool constant = total_degree(e) == 0;
    if (mag != 1 || constant) os << mag;
    bool wrote = mag != 1 || constant;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (wrote) os << "*";
      wrote = true;
      os << "X";
      if (p.dim() > 1) os << (i + 1);
      if (e[i] > 1) os << "^" << e[i];
    }
  }
  return os.str();
}

}  // namespace weylmax
