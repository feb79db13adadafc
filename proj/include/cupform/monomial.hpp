#pragma once

#include <compare>
#include <numeric>
#include <string>
#include <vector>

#include "cupform/error.hpp"

namespace cupform {

// Exponent vector of a monomial in a fixed number of variables. Ordered by
// graded lexicographic order: total degree first, then lexicographic on the
// exponent vector.
class Monomial {
 public:
  explicit Monomial(std::vector<int> exps) : exps_(std::move(exps)) {
    for (int e : exps_)
      require(e >= 0, ErrorCode::bad_shape, "negative exponent in monomial");
  }

  static Monomial unit(int num_vars, int var, int power = 1) {
    require(var >= 0 && var < num_vars, ErrorCode::index_out_of_range,
            "variable index out of range");
    std::vector<int> e(num_vars, 0);
    e[var] = power;
    return Monomial(std::move(e));
  }

  static Monomial constant(int num_vars) {
    return Monomial(std::vector<int>(num_vars, 0));
  }

  int num_vars() const { return static_cast<int>(exps_.size()); }
  int degree() const { return std::accumulate(exps_.begin(), exps_.end(), 0); }
  int operator[](int i) const { return exps_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& exponents() const { return exps_; }

  Monomial times(const Monomial& other) const {
    require(num_vars() == other.num_vars(), ErrorCode::dimension_mismatch,
            "monomial variable counts differ");
    std::vector<int> e = exps_;
    for (std::size_t i = 0; i < e.size(); ++i) e[i] += other.exps_[i];
    return Monomial(std::move(e));
  }

  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.exps_ == b.exps_;
  }

  friend std::strong_ordering operator<=>(const Monomial& a,
                                          const Monomial& b) {
    if (auto c = a.degree() <=> b.degree(); c != 0) return c;
    return a.exps_ <=> b.exps_;
  }

  std::string str() const {
    std::string out;
    for (int i = 0; i < num_vars(); ++i) {
      int e = exps_[static_cast<std::size_t>(i)];
      if (e == 0) continue;
      if (!out.empty()) out += "*";
      out += "x" + std::to_string(i);
      if (e > 1) out += "^" + std::to_string(e);
    }
    return out.empty() ? "1" : out;
  }

 private:
  std::vector<int> exps_;
};

}  // namespace cupform
