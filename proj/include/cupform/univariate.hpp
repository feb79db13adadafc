#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "cupform/error.hpp"
#include "cupform/rational.hpp"

namespace cupform {

// Dense univariate polynomial over the rationals, used for pencils A0 + t*A1.
// Coefficients are stored low to high with no trailing zeros; degree() of the
// zero polynomial is -1.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
    trim();
  }

  static UniPoly constant(const Rational& c) { return UniPoly({c}); }
  static UniPoly linear(const Rational& c0, const Rational& c1) {
    return UniPoly({c0, c1});
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coeffs() const { return c_; }

  Rational coeff(int k) const {
    if (k < 0 || k >= static_cast<int>(c_.size())) return Rational(0);
    return c_[static_cast<std::size_t>(k)];
  }

  Rational eval(const Rational& x) const {
    Rational acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      acc *= x;
      acc += *it;
    }
    return acc;
  }

  friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
    std::vector<Rational> out(std::max(a.c_.size(), b.c_.size()), Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) out[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) out[i] += b.c_[i];
    return UniPoly(std::move(out));
  }

  friend UniPoly operator-(const UniPoly& a, const UniPoly& b) {
    std::vector<Rational> out(std::max(a.c_.size(), b.c_.size()), Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) out[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) out[i] -= b.c_[i];
    return UniPoly(std::move(out));
  }

  friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    if (a.is_zero() || b.is_zero()) return UniPoly();
    std::vector<Rational> out(a.c_.size() + b.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j)
        out[i + j] += a.c_[i] * b.c_[j];
    return UniPoly(std::move(out));
  }

  friend bool operator==(const UniPoly& a, const UniPoly& b) {
    return a.c_ == b.c_;
  }

  UniPoly monic() const {
    if (is_zero()) return *this;
    std::vector<Rational> out = c_;
    Rational inv = Rational(1) / c_.back();
    for (auto& x : out) x *= inv;
    return UniPoly(std::move(out));
  }

  // Euclidean remainder.
  friend UniPoly operator%(UniPoly a, const UniPoly& b) {
    require(!b.is_zero(), ErrorCode::bad_input, "division by zero polynomial");
    while (!a.is_zero() && a.degree() >= b.degree()) {
      Rational scale = a.c_.back() / b.c_.back();
      int shift = a.degree() - b.degree();
      for (std::size_t i = 0; i < b.c_.size(); ++i)
        a.c_[i + static_cast<std::size_t>(shift)] -= scale * b.c_[i];
      a.trim();
    }
    return a;
  }

 private:
  void trim() {
    while (!c_.empty() && cupform::is_zero(c_.back())) c_.pop_back();
  }

  std::vector<Rational> c_;
};

inline UniPoly gcd(UniPoly a, UniPoly b) {
  while (!b.is_zero()) {
    UniPoly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

// Determinant of a square matrix of univariate polynomials, by expansion over
// column subsets. Fine for the small minors this library meets.
inline UniPoly unipoly_det(const std::vector<std::vector<UniPoly>>& m) {
  const int n = static_cast<int>(m.size());
  require(n <= 20, ErrorCode::bad_shape, "polynomial determinant too large");
  for (const auto& row : m)
    require(static_cast<int>(row.size()) == n, ErrorCode::bad_shape,
            "polynomial matrix not square");
  if (n == 0) return UniPoly::constant(Rational(1));
  std::map<unsigned, UniPoly> memo;
  // det of rows [popcount(mask)..n) on the columns outside mask
  std::function<UniPoly(unsigned)> rec = [&](unsigned mask) -> UniPoly {
    int row = __builtin_popcount(mask);
    if (row == n) return UniPoly::constant(Rational(1));
    auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    UniPoly acc;
    int sign = 1;
    for (int col = 0; col < n; ++col) {
      unsigned bit = 1u << col;
      if (mask & bit) continue;
      const UniPoly& entry = m[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
      if (!entry.is_zero()) {
        UniPoly sub = rec(mask | bit);
        UniPoly contrib = entry * sub;
        if (sign < 0) contrib = UniPoly() - contrib;
        acc = acc + contrib;
      }
      sign = -sign;
    }
    memo.emplace(mask, acc);
    return acc;
  };
  return rec(0u);
}

}  // namespace cupform
