#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cupform/error.hpp"
#include "cupform/rational.hpp"
#include "cupform/univariate.hpp"

namespace cupform {

// Dense tensor with rational entries, row-major layout (last index fastest).
class HyperTensor {
 public:
  explicit HyperTensor(std::vector<int> shape) : shape_(std::move(shape)) {
    entries_.assign(size_from_shape(shape_), Rational(0));
  }

  HyperTensor(std::vector<int> shape, std::vector<Rational> entries)
      : shape_(std::move(shape)), entries_(std::move(entries)) {
    require(entries_.size() == size_from_shape(shape_), ErrorCode::bad_shape,
            "entry count does not match shape");
  }

  int order() const { return static_cast<int>(shape_.size()); }
  const std::vector<int>& shape() const { return shape_; }
  std::size_t size() const { return entries_.size(); }
  const std::vector<Rational>& entries() const { return entries_; }

  const Rational& flat(std::size_t i) const { return entries_[i]; }
  Rational& flat(std::size_t i) { return entries_[i]; }

  std::size_t flat_index(const std::vector<int>& idx) const {
    require(idx.size() == shape_.size(), ErrorCode::dimension_mismatch,
            "index tuple length differs from tensor order");
    std::size_t f = 0;
    for (std::size_t a = 0; a < shape_.size(); ++a) {
      require(idx[a] >= 0 && idx[a] < shape_[a], ErrorCode::index_out_of_range,
              "tensor index out of range");
      f = f * static_cast<std::size_t>(shape_[a]) + static_cast<std::size_t>(idx[a]);
    }
    return f;
  }

  const Rational& at(const std::vector<int>& idx) const {
    return entries_[flat_index(idx)];
  }
  Rational& at(const std::vector<int>& idx) { return entries_[flat_index(idx)]; }

  std::vector<int> multi_index(std::size_t flat) const {
    std::vector<int> idx(shape_.size(), 0);
    for (std::size_t a = shape_.size(); a-- > 0;) {
      idx[a] = static_cast<int>(flat % static_cast<std::size_t>(shape_[a]));
      flat /= static_cast<std::size_t>(shape_[a]);
    }
    return idx;
  }

  bool is_zero() const {
    for (const auto& e : entries_)
      if (!cupform::is_zero(e)) return false;
    return true;
  }

  friend bool operator==(const HyperTensor& a, const HyperTensor& b) {
    return a.shape_ == b.shape_ && a.entries_ == b.entries_;
  }

  static std::size_t size_from_shape(const std::vector<int>& shape) {
    require(!shape.empty(), ErrorCode::bad_shape, "tensor order must be >= 1");
    std::size_t s = 1;
    for (int d : shape) {
      require(d >= 1, ErrorCode::bad_shape, "tensor axis length must be >= 1");
      s *= static_cast<std::size_t>(d);
    }
    return s;
  }

 private:
  std::vector<int> shape_;
  std::vector<Rational> entries_;
};

class Matrix {
 public:
  Matrix(int rows, int cols) : rows_(rows), cols_(cols) {
    require(rows >= 1 && cols >= 1, ErrorCode::bad_shape,
            "matrix dimensions must be >= 1");
    e_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols),
              Rational(0));
  }

  explicit Matrix(const std::vector<std::vector<Rational>>& rows)
      : Matrix(static_cast<int>(rows.size()),
               rows.empty() ? 0 : static_cast<int>(rows.front().size())) {
    for (int i = 0; i < rows_; ++i) {
      require(static_cast<int>(rows[static_cast<std::size_t>(i)].size()) == cols_,
              ErrorCode::bad_shape, "ragged matrix rows");
      for (int j = 0; j < cols_; ++j)
        at(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  const Rational& at(int i, int j) const {
    return e_[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
              static_cast<std::size_t>(j)];
  }
  Rational& at(int i, int j) {
    return e_[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
              static_cast<std::size_t>(j)];
  }

  bool is_zero() const {
    for (const auto& x : e_)
      if (!cupform::is_zero(x)) return false;
    return true;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
  }

  HyperTensor as_tensor() const {
    return HyperTensor({rows_, cols_}, e_);
  }

  static Matrix from_tensor(const HyperTensor& t) {
    require(t.order() == 2, ErrorCode::bad_shape,
            "only an order-2 tensor converts to a matrix");
    Matrix m(t.shape()[0], t.shape()[1]);
    m.e_ = t.entries();
    return m;
  }

 private:
  int rows_, cols_;
  std::vector<Rational> e_;
};

// Index subsets, one strictly increasing list per axis.
struct SubtensorSpec {
  std::vector<std::vector<int>> index_sets;
};

inline HyperTensor subtensor(const HyperTensor& t, const SubtensorSpec& spec) {
  require(static_cast<int>(spec.index_sets.size()) == t.order(),
          ErrorCode::dimension_mismatch,
          "subtensor needs one index set per axis");
  std::vector<int> shape(spec.index_sets.size());
  for (std::size_t a = 0; a < spec.index_sets.size(); ++a) {
    const auto& set = spec.index_sets[a];
    require(!set.empty(), ErrorCode::bad_shape, "empty index set");
    for (std::size_t k = 0; k < set.size(); ++k) {
      require(set[k] >= 0 && set[k] < t.shape()[a],
              ErrorCode::index_out_of_range, "subtensor index out of range");
      require(k == 0 || set[k] > set[k - 1], ErrorCode::bad_shape,
              "index sets must be strictly increasing");
    }
    shape[a] = static_cast<int>(set.size());
  }
  HyperTensor out(shape);
  std::vector<int> idx(shape.size(), 0);
  for (std::size_t f = 0; f < out.size(); ++f) {
    auto local = out.multi_index(f);
    for (std::size_t a = 0; a < local.size(); ++a)
      idx[a] = spec.index_sets[a][static_cast<std::size_t>(local[a])];
    out.flat(f) = t.at(idx);
  }
  return out;
}

// Fix one axis at a given index; drops that axis.
inline HyperTensor slice(const HyperTensor& t, int axis, int index) {
  require(t.order() >= 2, ErrorCode::bad_shape, "slicing needs order >= 2");
  require(axis >= 0 && axis < t.order(), ErrorCode::index_out_of_range,
          "slice axis out of range");
  require(index >= 0 && index < t.shape()[static_cast<std::size_t>(axis)],
          ErrorCode::index_out_of_range, "slice index out of range");
  std::vector<int> shape;
  for (int a = 0; a < t.order(); ++a)
    if (a != axis) shape.push_back(t.shape()[static_cast<std::size_t>(a)]);
  HyperTensor out(shape);
  std::vector<int> idx(static_cast<std::size_t>(t.order()), 0);
  for (std::size_t f = 0; f < out.size(); ++f) {
    auto local = out.multi_index(f);
    std::size_t pos = 0;
    for (int a = 0; a < t.order(); ++a)
      idx[static_cast<std::size_t>(a)] =
          (a == axis) ? index : local[pos++];
    out.flat(f) = t.at(idx);
  }
  return out;
}

// Mode flattening: rows indexed by the chosen axis, columns by the remaining
// indices in row-major order.
inline Matrix flatten(const HyperTensor& t, int axis) {
  require(axis >= 0 && axis < t.order(), ErrorCode::index_out_of_range,
          "flatten axis out of range");
  const int rows = t.shape()[static_cast<std::size_t>(axis)];
  const std::size_t cols = t.size() / static_cast<std::size_t>(rows);
  Matrix m(rows, static_cast<int>(cols));
  for (std::size_t f = 0; f < t.size(); ++f) {
    auto idx = t.multi_index(f);
    int r = idx[static_cast<std::size_t>(axis)];
    std::size_t c = 0;
    for (int a = 0; a < t.order(); ++a) {
      if (a == axis) continue;
      c = c * static_cast<std::size_t>(t.shape()[static_cast<std::size_t>(a)]) +
          static_cast<std::size_t>(idx[static_cast<std::size_t>(a)]);
    }
    m.at(r, static_cast<int>(c)) = t.flat(f);
  }
  return m;
}

// Contract one axis against a vector.
inline HyperTensor contract_axis(const HyperTensor& t, int axis,
                                 const std::vector<Rational>& v) {
  require(t.order() >= 2, ErrorCode::bad_shape, "contraction needs order >= 2");
  require(axis >= 0 && axis < t.order(), ErrorCode::index_out_of_range,
          "contraction axis out of range");
  require(static_cast<int>(v.size()) == t.shape()[static_cast<std::size_t>(axis)],
          ErrorCode::dimension_mismatch, "vector length differs from axis");
  std::vector<int> shape;
  for (int a = 0; a < t.order(); ++a)
    if (a != axis) shape.push_back(t.shape()[static_cast<std::size_t>(a)]);
  HyperTensor out(shape);
  std::vector<int> idx(static_cast<std::size_t>(t.order()), 0);
  for (std::size_t f = 0; f < out.size(); ++f) {
    auto local = out.multi_index(f);
    Rational acc(0);
    for (int k = 0; k < t.shape()[static_cast<std::size_t>(axis)]; ++k) {
      std::size_t pos = 0;
      for (int a = 0; a < t.order(); ++a)
        idx[static_cast<std::size_t>(a)] = (a == axis) ? k : local[pos++];
      acc += t.at(idx) * v[static_cast<std::size_t>(k)];
    }
    out.flat(f) = acc;
  }
  return out;
}

inline HyperTensor from_rank_one(
    const std::vector<std::vector<Rational>>& factors) {
  require(!factors.empty(), ErrorCode::bad_shape,
          "rank-one tensor needs at least one factor");
  std::vector<int> shape;
  for (const auto& v : factors) {
    require(!v.empty(), ErrorCode::bad_shape, "empty factor vector");
    shape.push_back(static_cast<int>(v.size()));
  }
  HyperTensor out(shape);
  for (std::size_t f = 0; f < out.size(); ++f) {
    auto idx = out.multi_index(f);
    Rational p(1);
    for (std::size_t a = 0; a < factors.size(); ++a)
      p *= factors[a][static_cast<std::size_t>(idx[a])];
    out.flat(f) = p;
  }
  return out;
}

// Exact rank by fraction-free elimination on an integer rescaling of the
// rows. Division steps stay exact even across skipped columns because the
// update of an entry involves only its own column and the pivot column.
inline int matrix_rank(const Matrix& m) {
  const int rows = m.rows(), cols = m.cols();
  std::vector<std::vector<Integer>> a(static_cast<std::size_t>(rows),
                                      std::vector<Integer>(static_cast<std::size_t>(cols)));
  for (int i = 0; i < rows; ++i) {
    Integer lcm(1);
    for (int j = 0; j < cols; ++j) {
      Integer den = m.at(i, j).get_den();
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), den.get_mpz_t());
    }
    for (int j = 0; j < cols; ++j) {
      Rational scaled = m.at(i, j) * Rational(lcm);
      a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = scaled.get_num();
    }
  }
  Integer prev(1);
  int r = 0;
  for (int col = 0; col < cols && r < rows; ++col) {
    int pivot = -1;
    for (int i = r; i < rows; ++i) {
      if (sgn(a[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)]) != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(a[static_cast<std::size_t>(r)], a[static_cast<std::size_t>(pivot)]);
    for (int i = r + 1; i < rows; ++i) {
      for (int j = col + 1; j < cols; ++j) {
        Integer num = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] *
                          a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                      a[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)] *
                          a[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
        Integer q, rem;
        mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(),
                    prev.get_mpz_t());
        require(sgn(rem) == 0, ErrorCode::internal_check_failed,
                "fraction-free elimination divided inexactly");
        a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = q;
      }
      a[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)] = 0;
    }
    prev = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
    ++r;
  }
  return r;
}

// Basis of the right kernel, from the reduced row echelon form. One basis
// vector per free column, in increasing column order.
inline std::vector<std::vector<Rational>> nullspace(const Matrix& m) {
  const int rows = m.rows(), cols = m.cols();
  std::vector<std::vector<Rational>> a(static_cast<std::size_t>(rows),
                                       std::vector<Rational>(static_cast<std::size_t>(cols)));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m.at(i, j);
  std::vector<int> pivot_col;
  int r = 0;
  for (int col = 0; col < cols && r < rows; ++col) {
    int pivot = -1;
    for (int i = r; i < rows; ++i) {
      if (!is_zero(a[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)])) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(a[static_cast<std::size_t>(r)], a[static_cast<std::size_t>(pivot)]);
    Rational scale = Rational(1) / a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
    for (int j = 0; j < cols; ++j)
      a[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] *= scale;
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      Rational f = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)];
      if (is_zero(f)) continue;
      for (int j = 0; j < cols; ++j)
        a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -=
            f * a[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
    }
    pivot_col.push_back(col);
    ++r;
  }
  std::vector<std::vector<Rational>> basis;
  std::size_t next_pivot = 0;
  for (int col = 0; col < cols; ++col) {
    if (next_pivot < pivot_col.size() && pivot_col[next_pivot] == col) {
      ++next_pivot;
      continue;
    }
    std::vector<Rational> v(static_cast<std::size_t>(cols), Rational(0));
    v[static_cast<std::size_t>(col)] = 1;
    for (std::size_t k = 0; k < pivot_col.size(); ++k)
      v[static_cast<std::size_t>(pivot_col[k])] =
          -a[k][static_cast<std::size_t>(col)];
    basis.push_back(std::move(v));
  }
  return basis;
}

// A tensor has rank <= 1 exactly when every mode flattening does.
inline bool is_rank_le_one(const HyperTensor& t) {
  if (t.is_zero()) return true;
  for (int a = 0; a < t.order(); ++a)
    if (matrix_rank(flatten(t, a)) > 1) return false;
  return true;
}

// Largest rank among the mode flattenings; a lower bound for tensor rank.
inline int flattening_lower_bound(const HyperTensor& t) {
  int best = 0;
  for (int a = 0; a < t.order(); ++a)
    best = std::max(best, matrix_rank(flatten(t, a)));
  return best;
}

// All k-element subsets of {0..n-1}, each increasing, in lexicographic order.
inline std::vector<std::vector<int>> index_subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int v = start; v <= n - (k - static_cast<int>(cur.size())); ++v) {
      cur.push_back(v);
      self(self, v + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

inline Matrix stack_as_rows(const std::vector<Matrix>& mats) {
  const int n = static_cast<int>(mats.size());
  const int len = mats.front().rows() * mats.front().cols();
  Matrix out(n, len);
  for (int i = 0; i < n; ++i) {
    int c = 0;
    for (int r = 0; r < mats.front().rows(); ++r)
      for (int j = 0; j < mats.front().cols(); ++j)
        out.at(i, c++) = mats[static_cast<std::size_t>(i)].at(r, j);
  }
  return out;
}

struct LemmaTrickResult {
  int bound = 0;            // q + t
  int q = 0;                // number of independent trailing slices
  int t = 0;                // certified min rank over the affine pencil
  bool exact_t = false;     // true when t was computed, not caller-supplied
  int samples_checked = 0;  // random pencil members tested against t
};

// Lower bound rank >= q + t for a tensor given through slices
// [A_0, A_1, ..., A_q] along one axis: A_1..A_q must be linearly
// independent, and t must bound the rank of A_0 + sum mu_j A_j from below
// for every mu. For q = 1 the bound t is computed exactly from the common
// roots of the pencil minors; for q >= 2 the caller supplies t and the
// routine falsification-tests it on random pencil members.
inline LemmaTrickResult lemma_trick_bound(
    const std::vector<Matrix>& slices, std::optional<int> caller_t = {},
    int samples = 200, std::uint64_t seed = 0) {
  require(slices.size() >= 2, ErrorCode::bad_shape,
          "need an affine slice and at least one pencil slice");
  const int rows = slices.front().rows(), cols = slices.front().cols();
  for (const auto& s : slices)
    require(s.rows() == rows && s.cols() == cols, ErrorCode::bad_shape,
            "pencil slices must share one shape");
  const int q = static_cast<int>(slices.size()) - 1;
  std::vector<Matrix> trailing(slices.begin() + 1, slices.end());
  require(matrix_rank(stack_as_rows(trailing)) == q,
          ErrorCode::dependent_slices,
          "trailing slices must be linearly independent");

  LemmaTrickResult res;
  res.q = q;
  if (q == 1) {
    // Pencil P(u) = A_0 + u A_1. t is one less than the smallest minor size
    // whose minors all vanish somewhere simultaneously (as polynomials in u:
    // all identically zero, or sharing a root through a nonconstant gcd).
    std::vector<std::vector<UniPoly>> pencil(
        static_cast<std::size_t>(rows),
        std::vector<UniPoly>(static_cast<std::size_t>(cols)));
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        pencil[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            UniPoly::linear(slices[0].at(i, j), slices[1].at(i, j));
    const int maxs = std::min(rows, cols);
    int t = maxs;
    for (int s = 1; s <= maxs; ++s) {
      auto row_sets = index_subsets(rows, s);
      auto col_sets = index_subsets(cols, s);
      bool all_zero = true;
      bool shared = true;
      UniPoly g;
      for (const auto& rr : row_sets) {
        for (const auto& cc : col_sets) {
          std::vector<std::vector<UniPoly>> sub(
              static_cast<std::size_t>(s),
              std::vector<UniPoly>(static_cast<std::size_t>(s)));
          for (int i = 0; i < s; ++i)
            for (int j = 0; j < s; ++j)
              sub[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                  pencil[static_cast<std::size_t>(rr[static_cast<std::size_t>(i)])]
                        [static_cast<std::size_t>(cc[static_cast<std::size_t>(j)])];
          UniPoly d = unipoly_det(sub);
          if (d.is_zero()) continue;
          all_zero = false;
          g = g.is_zero() ? d.monic() : gcd(g, d);
          if (g.degree() < 1) {
            shared = false;
            break;
          }
        }
        if (!shared) break;
      }
      if (all_zero || shared) {
        t = s - 1;
        break;
      }
    }
    require(!caller_t || *caller_t <= t, ErrorCode::bad_input,
            "supplied pencil bound exceeds the exact computation");
    res.t = t;
    res.exact_t = true;
  } else {
    require(caller_t.has_value(), ErrorCode::caller_t_required,
            "pencil dimension >= 2 needs a caller-supplied rank bound");
    res.t = *caller_t;
    res.exact_t = false;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 9);
    for (int n = 0; n < samples; ++n) {
      Matrix member = slices[0];
      for (int k = 1; k <= q; ++k) {
        Rational mu = make_rational(num(rng), den(rng));
        for (int i = 0; i < rows; ++i)
          for (int j = 0; j < cols; ++j)
            member.at(i, j) += mu * slices[static_cast<std::size_t>(k)].at(i, j);
      }
      require(matrix_rank(member) >= res.t, ErrorCode::sample_falsified,
              "random pencil member fell below the supplied rank bound");
      ++res.samples_checked;
    }
  }
  res.bound = res.q + res.t;
  return res;
}

// 2x2x2 hyperdeterminant, 12-term polynomial in the entries. Works over any
// commutative ring type with +, -, * and integer scaling.
template <class R>
R cayley222_formula(const std::array<R, 8>& a) {
  auto sq = [](const R& x) { return x * x; };
  R plus = sq(a[0] * a[7]) + sq(a[1] * a[6]) + sq(a[2] * a[5]) + sq(a[3] * a[4]);
  R twos = a[0] * a[1] * a[6] * a[7] + a[0] * a[2] * a[5] * a[7] +
           a[0] * a[3] * a[4] * a[7] + a[1] * a[2] * a[5] * a[6] +
           a[1] * a[3] * a[4] * a[6] + a[2] * a[3] * a[4] * a[5];
  R fours = a[0] * a[3] * a[5] * a[6] + a[1] * a[2] * a[4] * a[7];
  return plus - (twos + twos) + (fours + fours + fours + fours);
}

inline Rational cayley_hyperdet_222(const HyperTensor& t) {
  require(t.shape() == std::vector<int>({2, 2, 2}), ErrorCode::bad_shape,
          "hyperdeterminant needs shape 2x2x2");
  std::array<Rational, 8> a;
  for (std::size_t i = 0; i < 8; ++i) a[i] = t.flat(i);
  return cayley222_formula(a);
}

// Exact rank of a 2x2x2 tensor: 0, 1, 2 or 3. Classified through the pencil
// of axis-2 slices; rank 3 happens exactly on the nonzero tensors with
// vanishing hyperdeterminant whose slice pencil is not spanned by matrices
// of rank <= 1.
inline int rank_222(const HyperTensor& t) {
  require(t.shape() == std::vector<int>({2, 2, 2}), ErrorCode::bad_shape,
          "rank classification needs shape 2x2x2");
  if (t.is_zero()) return 0;
  if (is_rank_le_one(t)) return 1;
  Matrix a0 = Matrix::from_tensor(slice(t, 2, 0));
  Matrix a1 = Matrix::from_tensor(slice(t, 2, 1));
  if (matrix_rank(stack_as_rows({a0, a1})) <= 1) {
    const Matrix& nz = a0.is_zero() ? a1 : a0;
    return matrix_rank(nz);
  }
  auto det2 = [](const Matrix& m) -> Rational {
    return m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
  };
  Matrix sum(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) sum.at(i, j) = a0.at(i, j) + a1.at(i, j);
  Rational d0 = det2(a0), d1 = det2(a1);
  Rational mid = det2(sum) - d0 - d1;
  Rational disc = mid * mid - 4 * d0 * d1;
  if (!is_zero(disc)) return 2;
  // Binary quadratic det(alpha A0 + beta A1) with zero discriminant: either
  // identically zero (two independent rank-one slices) or a double root.
  if (is_zero(d0) && is_zero(d1) && is_zero(mid)) return 2;
  return 3;
}

struct RankOneTerm {
  Rational coef;
  std::vector<std::vector<Rational>> factors;
};

struct RankBounds {
  int lower = 0;
  std::optional<int> upper;
  std::string certificate;
  std::vector<RankOneTerm> decomposition;
};

inline HyperTensor scaled_outer(const RankOneTerm& term) {
  HyperTensor t = from_rank_one(term.factors);
  for (std::size_t f = 0; f < t.size(); ++f) t.flat(f) *= term.coef;
  return t;
}

// Gaussian cross elimination: peel one outer product per pivot.
inline std::vector<RankOneTerm> skeleton_decomposition(Matrix m) {
  std::vector<RankOneTerm> terms;
  for (;;) {
    int pr = -1, pc = -1;
    for (int i = 0; i < m.rows() && pr < 0; ++i)
      for (int j = 0; j < m.cols(); ++j)
        if (!is_zero(m.at(i, j))) {
          pr = i;
          pc = j;
          break;
        }
    if (pr < 0) break;
    RankOneTerm term;
    term.coef = Rational(1) / m.at(pr, pc);
    std::vector<Rational> col, row;
    for (int i = 0; i < m.rows(); ++i) col.push_back(m.at(i, pc));
    for (int j = 0; j < m.cols(); ++j) row.push_back(m.at(pr, j));
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j)
        m.at(i, j) -= term.coef * col[static_cast<std::size_t>(i)] *
                      row[static_cast<std::size_t>(j)];
    term.factors = {std::move(col), std::move(row)};
    terms.push_back(std::move(term));
  }
  return terms;
}

// Best available exact rank information for a tensor, with a matching
// decomposition when one is cheap to produce.
inline RankBounds rank_bounds(const HyperTensor& t) {
  RankBounds out;
  if (t.is_zero()) {
    out.lower = 0;
    out.upper = 0;
    out.certificate = "zero tensor";
    return out;
  }
  if (is_rank_le_one(t)) {
    std::size_t star = 0;
    while (cupform::is_zero(t.flat(star))) ++star;
    auto idx = t.multi_index(star);
    RankOneTerm term;
    for (int a = 0; a < t.order(); ++a) {
      std::vector<Rational> v;
      auto probe = idx;
      for (int k = 0; k < t.shape()[static_cast<std::size_t>(a)]; ++k) {
        probe[static_cast<std::size_t>(a)] = k;
        v.push_back(t.at(probe));
      }
      term.factors.push_back(std::move(v));
    }
    term.coef = Rational(1) /
                rational_pow(t.flat(star), static_cast<unsigned>(t.order() - 1));
    require(scaled_outer(term) == t, ErrorCode::internal_check_failed,
            "rank-one factor extraction failed verification");
    out.lower = 1;
    out.upper = 1;
    out.certificate = "rank-one factorization";
    out.decomposition.push_back(std::move(term));
    return out;
  }
  if (t.order() == 2) {
    Matrix m = Matrix::from_tensor(t);
    out.decomposition = skeleton_decomposition(m);
    out.lower = static_cast<int>(out.decomposition.size());
    require(out.lower == matrix_rank(m), ErrorCode::internal_check_failed,
            "skeleton decomposition length differs from matrix rank");
    out.upper = out.lower;
    out.certificate = "matrix rank with skeleton decomposition";
    return out;
  }
  if (t.shape() == std::vector<int>({2, 2, 2})) {
    int r = rank_222(t);
    out.lower = r;
    out.upper = r;
    out.certificate = "2x2x2 pencil classification";
    return out;
  }
  out.lower = flattening_lower_bound(t);
  out.certificate = "max flattening rank";
  return out;
}

}  // namespace cupform
