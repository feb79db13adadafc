#pragma once

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "cupform/error.hpp"

namespace cupform {

// Exact rational scalar. mpq_class keeps values in lowest terms with a
// positive denominator as long as arithmetic stays inside mpq_class; raw
// constructions below always call canonicalize().
using Rational = mpq_class;
using Integer = mpz_class;

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }

inline Rational make_rational(long num, long den = 1) {
  require(den != 0, ErrorCode::bad_rational, "denominator must be nonzero");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Accepts an optionally signed integer, or "p/q" with q > 0 after reduction.
// Anything else (whitespace, decimals, empty parts, zero denominator) is
// rejected.
inline Rational parse_rational(std::string_view text) {
  auto bad = [&]() -> Rational {
    fail(ErrorCode::bad_rational,
         "not a rational literal: \"" + std::string(text) + "\"");
  };
  auto is_int = [](std::string_view s) {
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char ch : s)
      if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
    return true;
  };
  std::size_t slash = text.find('/');
  std::string_view num = text.substr(0, slash == std::string_view::npos
                                            ? text.size()
                                            : slash);
  if (!is_int(num)) return bad();
  Integer n(std::string(num), 10);
  Integer d(1);
  if (slash != std::string_view::npos) {
    std::string_view den = text.substr(slash + 1);
    if (!is_int(den)) return bad();
    d = Integer(std::string(den), 10);
    if (sgn(d) == 0) return bad();
  }
  Rational r(n, d);
  r.canonicalize();
  return r;
}

// "p" when the denominator is 1, else "p/q" with q > 0.
inline std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline Rational rational_pow(const Rational& base, unsigned exp) {
  Rational acc(1);
  Rational b = base;
  unsigned e = exp;
  while (e > 0) {
    if (e & 1u) acc *= b;
    b *= b;
    e >>= 1u;
  }
  return acc;
}

inline Integer integer_factorial(unsigned n) {
  Integer f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

inline bool is_zero_vector(const std::vector<Rational>& v) {
  for (const auto& x : v)
    if (!is_zero(x)) return false;
  return true;
}

}  // namespace cupform
