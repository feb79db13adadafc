#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cupform/error.hpp"
#include "cupform/monomial.hpp"
#include "cupform/rational.hpp"

namespace cupform {

// Homogeneous polynomial with exact rational coefficients. Terms are kept in
// descending graded-lex order and never store a zero coefficient, so equal
// forms have identical term maps. A zero form still remembers its variable
// count and degree.
class Form {
 public:
  using TermMap = std::map<Monomial, Rational, std::greater<Monomial>>;

  Form(int num_vars, int degree) : num_vars_(num_vars), degree_(degree) {
    require(num_vars >= 0, ErrorCode::bad_shape, "negative variable count");
    require(degree >= 0, ErrorCode::bad_shape, "negative degree");
  }

  static Form zero(int num_vars, int degree) { return Form(num_vars, degree); }

  static Form constant(int num_vars, const Rational& c) {
    Form f(num_vars, 0);
    f.add_term(Monomial::constant(num_vars), c);
    return f;
  }

  static Form linear(const std::vector<Rational>& coeffs) {
    Form f(static_cast<int>(coeffs.size()), 1);
    for (int i = 0; i < f.num_vars(); ++i)
      f.add_term(Monomial::unit(f.num_vars(), i), coeffs[static_cast<std::size_t>(i)]);
    return f;
  }

  int num_vars() const { return num_vars_; }
  int degree() const { return degree_; }
  bool is_zero() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

  Rational coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add_term(const Monomial& m, const Rational& c) {
    require(m.num_vars() == num_vars_, ErrorCode::dimension_mismatch,
            "monomial variable count differs from form");
    require(m.degree() == degree_, ErrorCode::degree_mismatch,
            "monomial degree differs from form degree");
    if (cupform::is_zero(c)) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (cupform::is_zero(it->second)) terms_.erase(it);
    }
  }

  Form& operator+=(const Form& other) {
    require(num_vars_ == other.num_vars_, ErrorCode::dimension_mismatch,
            "adding forms in different variable counts");
    require(degree_ == other.degree_, ErrorCode::degree_mismatch,
            "adding forms of different degrees");
    for (const auto& [m, c] : other.terms_) add_term(m, c);
    return *this;
  }

  Form& operator-=(const Form& other) { return *this += other * Rational(-1); }

  Form& operator*=(const Rational& s) {
    if (cupform::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }

  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator*(Form a, const Rational& s) { return a *= s; }
  friend Form operator*(const Rational& s, Form a) { return a *= s; }

  friend Form operator*(const Form& a, const Form& b) {
    require(a.num_vars_ == b.num_vars_, ErrorCode::dimension_mismatch,
            "multiplying forms in different variable counts");
    Form out(a.num_vars_, a.degree_ + b.degree_);
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        Rational c = ca * cb;
        out.add_term(ma.times(mb), c);
      }
    }
    return out;
  }

  friend bool operator==(const Form& a, const Form& b) {
    return a.num_vars_ == b.num_vars_ && a.degree_ == b.degree_ &&
           a.terms_ == b.terms_;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [m, c] : terms_) {
      if (!out.empty()) out += " + ";
      out += to_string(c) + "*" + m.str();
    }
    return out;
  }

 private:
  int num_vars_;
  int degree_;
  TermMap terms_;
};

inline Form form_pow(const Form& base, unsigned exp) {
  Form acc = Form::constant(base.num_vars(), Rational(1));
  for (unsigned i = 0; i < exp; ++i) acc = acc * base;
  return acc;
}

// d/dx_i. The result of differentiating a constant keeps degree 0.
inline Form partial_derivative(const Form& f, int var) {
  require(var >= 0 && var < f.num_vars(), ErrorCode::index_out_of_range,
          "derivative variable out of range");
  Form out(f.num_vars(), std::max(f.degree() - 1, 0));
  if (f.degree() == 0) return out;
  for (const auto& [m, c] : f.terms()) {
    int e = m[var];
    if (e == 0) continue;
    std::vector<int> exps = m.exponents();
    exps[static_cast<std::size_t>(var)] = e - 1;
    Rational nc = c * e;
    out.add_term(Monomial(std::move(exps)), nc);
  }
  return out;
}

// Mixed partial for an index tuple, left to right. Tuples longer than the
// degree give the zero form.
inline Form iterated_partial(const Form& f, const std::vector<int>& vars) {
  Form out = f;
  for (int v : vars) out = partial_derivative(out, v);
  return out;
}

inline Rational evaluate(const Form& f, const std::vector<Rational>& point) {
  require(static_cast<int>(point.size()) == f.num_vars(),
          ErrorCode::dimension_mismatch, "evaluation point has wrong length");
  Rational total(0);
  for (const auto& [m, c] : f.terms()) {
    Rational t = c;
    for (int i = 0; i < f.num_vars(); ++i) {
      int e = m[i];
      if (e > 0) t *= rational_pow(point[static_cast<std::size_t>(i)],
                                   static_cast<unsigned>(e));
    }
    total += t;
  }
  return total;
}

// Derivative of f along direction v.
inline Form directional_derivative(const Form& f,
                                   const std::vector<Rational>& v) {
  require(static_cast<int>(v.size()) == f.num_vars(),
          ErrorCode::dimension_mismatch, "direction has wrong length");
  Form out(f.num_vars(), std::max(f.degree() - 1, 0));
  if (f.degree() == 0) return out;
  for (int i = 0; i < f.num_vars(); ++i) {
    if (is_zero(v[static_cast<std::size_t>(i)])) continue;
    out += partial_derivative(f, i) * v[static_cast<std::size_t>(i)];
  }
  return out;
}

// Remove a variable the form does not involve, relabeling the later ones.
inline Form drop_variable(const Form& f, int var) {
  require(var >= 0 && var < f.num_vars(), ErrorCode::index_out_of_range,
          "dropped variable out of range");
  Form out(f.num_vars() - 1, f.degree());
  for (const auto& [m, c] : f.terms()) {
    require(m[var] == 0, ErrorCode::bad_shape,
            "form depends on the dropped variable");
    std::vector<int> exps;
    exps.reserve(static_cast<std::size_t>(f.num_vars() - 1));
    for (int i = 0; i < f.num_vars(); ++i)
      if (i != var) exps.push_back(m[i]);
    out.add_term(Monomial(std::move(exps)), c);
  }
  return out;
}

// Reindex into a larger variable set: variable i becomes i + offset.
inline Form embed_variables(const Form& f, int new_num_vars, int offset) {
  require(offset >= 0 && f.num_vars() + offset <= new_num_vars,
          ErrorCode::dimension_mismatch, "embedding does not fit");
  Form out(new_num_vars, f.degree());
  for (const auto& [m, c] : f.terms()) {
    std::vector<int> exps(static_cast<std::size_t>(new_num_vars), 0);
    for (int i = 0; i < f.num_vars(); ++i)
      exps[static_cast<std::size_t>(i + offset)] = m[i];
    out.add_term(Monomial(std::move(exps)), c);
  }
  return out;
}

// Point of projective space, stored as any nonzero coordinate vector.
class ProjPoint {
 public:
  explicit ProjPoint(std::vector<Rational> coords) : coords_(std::move(coords)) {
    require(!coords_.empty(), ErrorCode::zero_vector, "empty coordinate vector");
    require(!is_zero_vector(coords_), ErrorCode::zero_vector,
            "projective point needs a nonzero coordinate");
  }

  static ProjPoint basis(int dim, int i) {
    require(i >= 0 && i < dim, ErrorCode::index_out_of_range,
            "basis index out of range");
    std::vector<Rational> c(static_cast<std::size_t>(dim), Rational(0));
    c[static_cast<std::size_t>(i)] = 1;
    return ProjPoint(std::move(c));
  }

  int dim() const { return static_cast<int>(coords_.size()); }
  const std::vector<Rational>& coords() const { return coords_; }

  // Representative scaled so the first nonzero coordinate is 1.
  ProjPoint canonical() const {
    std::vector<Rational> c = coords_;
    for (const auto& x : c) {
      if (!is_zero(x)) {
        Rational inv = Rational(1) / x;
        for (auto& y : c) y *= inv;
        break;
      }
    }
    return ProjPoint(std::move(c));
  }

  friend bool same_point(const ProjPoint& a, const ProjPoint& b) {
    if (a.dim() != b.dim()) return false;
    return a.canonical().coords_ == b.canonical().coords_;
  }

 private:
  std::vector<Rational> coords_;
};

// Lexicographic order on canonical representatives; a deterministic total
// order on projective points of equal dimension.
inline bool canonical_less(const ProjPoint& a, const ProjPoint& b) {
  const auto ca = a.canonical().coords();
  const auto cb = b.canonical().coords();
  if (ca.size() != cb.size()) return ca.size() < cb.size();
  for (std::size_t i = 0; i < ca.size(); ++i) {
    int c = cmp(ca[i], cb[i]);
    if (c != 0) return c < 0;
  }
  return false;
}

// Invertible linear substitution x = A y, rows indexed by the old variables.
class LinearChange {
 public:
  explicit LinearChange(std::vector<std::vector<Rational>> rows)
      : rows_(std::move(rows)) {
    const std::size_t n = rows_.size();
    require(n > 0, ErrorCode::bad_shape, "empty change matrix");
    for (const auto& r : rows_)
      require(r.size() == n, ErrorCode::bad_shape, "change matrix not square");
    det_ = determinant(rows_);
    require(!is_zero(det_), ErrorCode::singular_matrix,
            "change of coordinates must be invertible");
  }

  static LinearChange identity(int n) {
    std::vector<std::vector<Rational>> rows(
        static_cast<std::size_t>(n),
        std::vector<Rational>(static_cast<std::size_t>(n), Rational(0)));
    for (int i = 0; i < n; ++i)
      rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
    return LinearChange(std::move(rows));
  }

  int dim() const { return static_cast<int>(rows_.size()); }
  const Rational& at(int i, int j) const {
    return rows_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  const std::vector<std::vector<Rational>>& rows() const { return rows_; }
  const Rational& det() const { return det_; }

  LinearChange inverse() const {
    const int n = dim();
    auto a = rows_;
    auto inv = identity(n).rows_;
    for (int col = 0; col < n; ++col) {
      int pivot = -1;
      for (int r = col; r < n; ++r) {
        if (!is_zero(a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)])) {
          pivot = r;
          break;
        }
      }
      require(pivot >= 0, ErrorCode::singular_matrix, "matrix not invertible");
      std::swap(a[static_cast<std::size_t>(col)], a[static_cast<std::size_t>(pivot)]);
      std::swap(inv[static_cast<std::size_t>(col)], inv[static_cast<std::size_t>(pivot)]);
      Rational scale = Rational(1) / a[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
      for (int j = 0; j < n; ++j) {
        a[static_cast<std::size_t>(col)][static_cast<std::size_t>(j)] *= scale;
        inv[static_cast<std::size_t>(col)][static_cast<std::size_t>(j)] *= scale;
      }
      for (int r = 0; r < n; ++r) {
        if (r == col) continue;
        Rational factor = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
        if (is_zero(factor)) continue;
        for (int j = 0; j < n; ++j) {
          a[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] -=
              factor * a[static_cast<std::size_t>(col)][static_cast<std::size_t>(j)];
          inv[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] -=
              factor * inv[static_cast<std::size_t>(col)][static_cast<std::size_t>(j)];
        }
      }
    }
    return LinearChange(std::move(inv));
  }

  // Matrix product; substituting by compose(B) equals substituting by *this
  // and then by B.
  LinearChange compose(const LinearChange& other) const {
    require(dim() == other.dim(), ErrorCode::dimension_mismatch,
            "composing changes of different dimension");
    const int n = dim();
    std::vector<std::vector<Rational>> out(
        static_cast<std::size_t>(n),
        std::vector<Rational>(static_cast<std::size_t>(n), Rational(0)));
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        const Rational& aik = at(i, k);
        if (is_zero(aik)) continue;
        for (int j = 0; j < n; ++j)
          out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
              aik * other.at(k, j);
      }
    return LinearChange(std::move(out));
  }

  std::vector<Rational> apply(const std::vector<Rational>& v) const {
    require(static_cast<int>(v.size()) == dim(), ErrorCode::dimension_mismatch,
            "vector length differs from change dimension");
    std::vector<Rational> out(v.size(), Rational(0));
    for (int i = 0; i < dim(); ++i)
      for (int j = 0; j < dim(); ++j)
        out[static_cast<std::size_t>(i)] += at(i, j) * v[static_cast<std::size_t>(j)];
    return out;
  }

  ProjPoint apply(const ProjPoint& p) const {
    return ProjPoint(apply(p.coords()));
  }

 private:
  static Rational determinant(std::vector<std::vector<Rational>> a) {
    const std::size_t n = a.size();
    Rational det(1);
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t pivot = col;
      while (pivot < n && is_zero(a[pivot][col])) ++pivot;
      if (pivot == n) return Rational(0);
      if (pivot != col) {
        std::swap(a[pivot], a[col]);
        det = -det;
      }
      det *= a[col][col];
      Rational scale = Rational(1) / a[col][col];
      for (std::size_t r = col + 1; r < n; ++r) {
        if (is_zero(a[r][col])) continue;
        Rational factor = a[r][col] * scale;
        for (std::size_t j = col; j < n; ++j) a[r][j] -= factor * a[col][j];
      }
    }
    return det;
  }

  std::vector<std::vector<Rational>> rows_;
  Rational det_;
};

// F(A y): substitute x_i by the linear form given by row i of A.
inline Form apply_change(const Form& f, const LinearChange& a) {
  require(f.num_vars() == a.dim(), ErrorCode::dimension_mismatch,
          "change dimension differs from variable count");
  const int n = f.num_vars();
  std::vector<Form> rows;
  rows.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::vector<Rational> c(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) c[static_cast<std::size_t>(j)] = a.at(i, j);
    rows.push_back(Form::linear(c));
  }
  // Powers of each substituted row, filled on demand.
  std::vector<std::vector<Form>> pows(static_cast<std::size_t>(n));
  auto row_pow = [&](int i, int e) -> const Form& {
    auto& cache = pows[static_cast<std::size_t>(i)];
    if (cache.empty()) cache.push_back(Form::constant(n, Rational(1)));
    while (static_cast<int>(cache.size()) <= e)
      cache.push_back(cache.back() * rows[static_cast<std::size_t>(i)]);
    return cache[static_cast<std::size_t>(e)];
  };
  Form out(n, f.degree());
  for (const auto& [m, c] : f.terms()) {
    Form term = Form::constant(n, c);
    for (int i = 0; i < n; ++i)
      if (m[i] > 0) term = term * row_pow(i, m[i]);
    out += term;
  }
  return out;
}

}  // namespace cupform
