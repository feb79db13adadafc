#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cupform/error.hpp"
#include "cupform/form.hpp"
#include "cupform/tensor.hpp"

namespace cupform {

// Symmetric tensor of all order-n mixed partials of a degree-n form; the
// entry at (i_1..i_n) is the constant value of d^n F / dx_{i_1}..dx_{i_n}.
struct CoeffTensor {
  int num_vars;
  int degree;
  HyperTensor tensor;

  // Contract one slot against a vector; by symmetry the slot choice does
  // not matter. Contracting with a point gives the derivative hypermatrix
  // evaluated there.
  HyperTensor contract(const std::vector<Rational>& v) const {
    return contract_axis(tensor, degree - 1, v);
  }
};

inline CoeffTensor coeff_tensor(const Form& f) {
  require(f.degree() >= 1, ErrorCode::degree_too_low,
          "coefficient tensor needs degree >= 1");
  const int n = f.num_vars(), d = f.degree();
  require(n >= 1, ErrorCode::bad_shape, "form needs at least one variable");
  HyperTensor t(std::vector<int>(static_cast<std::size_t>(d), n));
  for (std::size_t flat = 0; flat < t.size(); ++flat) {
    auto idx = t.multi_index(flat);
    std::vector<int> exps(static_cast<std::size_t>(n), 0);
    for (int a : idx) ++exps[static_cast<std::size_t>(a)];
    Rational c = f.coefficient(Monomial(exps));
    if (is_zero(c)) continue;
    Integer mult(1);
    for (int e : exps) mult *= integer_factorial(static_cast<unsigned>(e));
    t.flat(flat) = c * Rational(mult);
  }
  return CoeffTensor{n, d, std::move(t)};
}

// Derivative hypermatrix of F evaluated at p: the order-(n-1) tensor with
// entry (d^{n-1} F / dx_J)(p).
inline HyperTensor hessian_at(const Form& f, const ProjPoint& p) {
  require(f.degree() >= 3, ErrorCode::degree_too_low,
          "derivative hypermatrix needs degree >= 3");
  require(p.dim() == f.num_vars(), ErrorCode::dimension_mismatch,
          "point dimension differs from variable count");
  return coeff_tensor(f).contract(p.coords());
}

// Hypermatrix of forms, row-major like HyperTensor.
struct FormTensor {
  std::vector<int> shape;
  std::vector<Form> entries;

  const Form& at(const std::vector<int>& idx) const {
    require(idx.size() == shape.size(), ErrorCode::dimension_mismatch,
            "index tuple length differs from tensor order");
    std::size_t f = 0;
    for (std::size_t a = 0; a < shape.size(); ++a) {
      require(idx[a] >= 0 && idx[a] < shape[a], ErrorCode::index_out_of_range,
              "tensor index out of range");
      f = f * static_cast<std::size_t>(shape[a]) + static_cast<std::size_t>(idx[a]);
    }
    return entries[f];
  }
};

// Derivative hypermatrix with entries left symbolic: order n-1, each entry
// the linear form d^{n-1} F / dx_J.
inline FormTensor hessian_symbolic(const Form& f) {
  require(f.degree() >= 3, ErrorCode::degree_too_low,
          "derivative hypermatrix needs degree >= 3");
  const int n = f.num_vars(), order = f.degree() - 1;
  FormTensor out;
  out.shape.assign(static_cast<std::size_t>(order), n);
  std::map<std::vector<int>, Form> memo;
  memo.emplace(std::vector<int>{}, f);
  auto derivative_for = [&](std::vector<int> sorted) -> const Form& {
    auto it = memo.find(sorted);
    if (it != memo.end()) return it->second;
    std::vector<int> chain = sorted;
    // Walk back to the longest memoized prefix, then differentiate forward.
    while (memo.find(chain) == memo.end()) chain.pop_back();
    Form cur = memo.at(chain);
    for (std::size_t k = chain.size(); k < sorted.size(); ++k) {
      cur = partial_derivative(cur, sorted[k]);
      chain.push_back(sorted[k]);
      memo.emplace(chain, cur);
    }
    return memo.at(sorted);
  };
  std::size_t total = HyperTensor::size_from_shape(out.shape);
  HyperTensor indexer(out.shape);
  out.entries.reserve(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    auto idx = indexer.multi_index(flat);
    std::sort(idx.begin(), idx.end());
    out.entries.push_back(derivative_for(idx));
  }
  return out;
}

struct HonestyResult {
  bool honest = false;
  // A nonzero direction whose directional derivative vanishes, when one
  // exists.
  std::optional<std::vector<Rational>> witness;
};

// F is honest when no nonzero direction annihilates it to first order. The
// kernel of v -> D_v F is cut out by rational linear equations, so a trivial
// rational kernel settles the question over the complex numbers too.
inline HonestyResult honest(const Form& f) {
  const int n = f.num_vars();
  require(n >= 1, ErrorCode::bad_shape, "form needs at least one variable");
  std::vector<Form> partials;
  std::set<Monomial, std::greater<Monomial>> support;
  for (int i = 0; i < n; ++i) {
    partials.push_back(partial_derivative(f, i));
    for (const auto& [m, c] : partials.back().terms()) support.insert(m);
  }
  HonestyResult out;
  if (support.empty()) {
    out.honest = false;
    std::vector<Rational> w(static_cast<std::size_t>(n), Rational(0));
    w[0] = 1;
    out.witness = std::move(w);
    return out;
  }
  Matrix m(static_cast<int>(support.size()), n);
  int r = 0;
  for (const auto& mono : support) {
    for (int i = 0; i < n; ++i)
      m.at(r, i) = partials[static_cast<std::size_t>(i)].coefficient(mono);
    ++r;
  }
  auto kernel = nullspace(m);
  if (kernel.empty()) {
    out.honest = true;
  } else {
    out.honest = false;
    out.witness = kernel.front();
  }
  return out;
}

// Substitute x_var := t * x_last and drop x_var, mapping an m-variable form
// to m-1 variables.
inline Form fold_variable(const Form& f, const Rational& t) {
  const int m = f.num_vars();
  require(m >= 2, ErrorCode::bad_shape, "folding needs two variables");
  Form out(m - 1, f.degree());
  for (const auto& [mono, c] : f.terms()) {
    int e0 = mono[0];
    std::vector<int> exps(static_cast<std::size_t>(m - 1));
    for (int i = 1; i < m; ++i) exps[static_cast<std::size_t>(i - 1)] = mono[i];
    exps[static_cast<std::size_t>(m - 2)] += e0;
    Rational nc = c * rational_pow(t, static_cast<unsigned>(e0));
    out.add_term(Monomial(std::move(exps)), nc);
  }
  return out;
}

// A rational point where a nonzero form does not vanish, found by repeatedly
// substituting the first variable with small multiples of the last one. Some
// multiple in {0..degree} always keeps the form nonzero.
inline std::vector<Rational> find_nonvanishing_point(const Form& g) {
  require(!g.is_zero(), ErrorCode::bad_input,
          "cannot find a nonvanishing point of the zero form");
  const int m = g.num_vars();
  if (m == 1) return {Rational(1)};
  for (int t = 0; t <= g.degree(); ++t) {
    Form folded = fold_variable(g, Rational(t));
    if (folded.is_zero()) continue;
    std::vector<Rational> q = find_nonvanishing_point(folded);
    std::vector<Rational> p;
    p.reserve(static_cast<std::size_t>(m));
    p.push_back(Rational(t) * q.back());
    for (auto& x : q) p.push_back(std::move(x));
    return p;
  }
  fail(ErrorCode::internal_check_failed,
       "no fold of a nonzero form stayed nonzero");
}

enum class TriState { yes, no, inconclusive };

struct NondegeneracyResult {
  TriState status = TriState::inconclusive;
  // Point where the determinant certificate is nonzero (status == yes).
  std::optional<ProjPoint> witness;
  // The symbolic determinant (degree 3) or hyperdeterminant (degree 4 in two
  // variables) of the derivative hypermatrix.
  std::optional<Form> certificate_form;
  std::string note;
};

// Determinant of a square matrix of forms, by expansion over column masks.
inline Form form_det(const std::vector<std::vector<Form>>& m) {
  const int n = static_cast<int>(m.size());
  require(n >= 1 && n <= 12, ErrorCode::bad_shape,
          "form determinant limited to 12x12");
  const int vars = m[0][0].num_vars();
  int entry_degree = 0;
  for (const auto& row : m) {
    require(static_cast<int>(row.size()) == n, ErrorCode::bad_shape,
            "form matrix not square");
    for (const auto& e : row) entry_degree = std::max(entry_degree, e.degree());
  }
  std::map<unsigned, Form> memo;
  auto rec = [&](auto&& self, unsigned mask) -> Form {
    int row = __builtin_popcount(mask);
    int deg = (n - row) * entry_degree;
    if (row == n) return Form::constant(vars, Rational(1));
    auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    Form acc(vars, deg);
    int sign = 1;
    for (int col = 0; col < n; ++col) {
      unsigned bit = 1u << col;
      if (mask & bit) continue;
      const Form& entry = m[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
      if (!entry.is_zero()) {
        Form sub = self(self, mask | bit);
        Form contrib = entry * sub;
        acc += sign > 0 ? contrib : contrib * Rational(-1);
      }
      sign = -sign;
    }
    memo.emplace(mask, acc);
    return acc;
  };
  return rec(rec, 0u);
}

// Degeneracy of the derivative hypermatrix, decided symbolically when a
// determinant-like invariant is available: an honest determinant for cubic
// forms, the 2x2x2 hyperdeterminant for quartic binary forms.
inline NondegeneracyResult nondegenerate(const Form& f) {
  NondegeneracyResult out;
  const int n = f.degree(), vars = f.num_vars();
  if (n == 3 && vars <= 12) {
    std::vector<std::vector<Form>> h(
        static_cast<std::size_t>(vars),
        std::vector<Form>(static_cast<std::size_t>(vars), Form(vars, 1)));
    for (int i = 0; i < vars; ++i)
      for (int j = i; j < vars; ++j) {
        Form d = partial_derivative(partial_derivative(f, i), j);
        h[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = d;
        h[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = d;
      }
    Form det = form_det(h);
    out.certificate_form = det;
    if (det.is_zero()) {
      out.status = TriState::no;
      out.note = "symbolic determinant of the derivative matrix vanishes";
    } else {
      out.status = TriState::yes;
      auto w = find_nonvanishing_point(det);
      require(!is_zero(evaluate(det, w)), ErrorCode::internal_check_failed,
              "witness fails the determinant certificate");
      out.witness = ProjPoint(w);
      out.note = "symbolic determinant of the derivative matrix is nonzero";
    }
    return out;
  }
  if (n == 4 && vars == 2) {
    auto d3 = [&](int i, int j, int k) {
      return iterated_partial(f, {i, j, k});
    };
    std::array<Form, 8> a{d3(0, 0, 0), d3(0, 0, 1), d3(0, 1, 0), d3(0, 1, 1),
                          d3(1, 0, 0), d3(1, 0, 1), d3(1, 1, 0), d3(1, 1, 1)};
    Form det = cayley222_formula(a);
    out.certificate_form = det;
    if (det.is_zero()) {
      out.status = TriState::no;
      out.note = "hyperdeterminant of the derivative hypermatrix vanishes";
    } else {
      out.status = TriState::yes;
      auto w = find_nonvanishing_point(det);
      require(!is_zero(evaluate(det, w)), ErrorCode::internal_check_failed,
              "witness fails the hyperdeterminant certificate");
      out.witness = ProjPoint(w);
      out.note = "hyperdeterminant of the derivative hypermatrix is nonzero";
    }
    return out;
  }
  out.status = TriState::inconclusive;
  out.note = "no symbolic determinant implemented for this degree and size";
  return out;
}

struct PurePowerResult {
  bool is_pure_power = false;
  std::optional<Rational> scalar;
  // Coefficients of the linear form, scaled so the first nonzero one is 1.
  std::optional<std::vector<Rational>> linear;
};

// Decide g = c * ell^d for a nonzero scalar c and a linear form ell. For a
// form with rational coefficients such an ell is forced to be rational, so
// the decision holds over any extension field.
inline PurePowerResult pure_power_test(const Form& g) {
  PurePowerResult out;
  const int d = g.degree(), m = g.num_vars();
  require(d >= 1, ErrorCode::degree_too_low, "pure power test needs degree >= 1");
  if (g.is_zero()) return out;
  int lead = -1;
  for (int i = 0; i < m && lead < 0; ++i)
    if (!is_zero(g.coefficient(Monomial::unit(m, i, d)))) lead = i;
  if (lead < 0) return out;
  Rational c = g.coefficient(Monomial::unit(m, lead, d));
  std::vector<Rational> ell(static_cast<std::size_t>(m), Rational(0));
  ell[static_cast<std::size_t>(lead)] = 1;
  for (int j = 0; j < m; ++j) {
    if (j == lead) continue;
    std::vector<int> exps(static_cast<std::size_t>(m), 0);
    exps[static_cast<std::size_t>(lead)] = d - 1;
    exps[static_cast<std::size_t>(j)] += 1;
    Rational mixed = g.coefficient(Monomial(std::move(exps)));
    ell[static_cast<std::size_t>(j)] = mixed / (Rational(d) * c);
  }
  Form candidate = form_pow(Form::linear(ell), static_cast<unsigned>(d)) * c;
  if (!(candidate == g)) return out;
  out.is_pure_power = true;
  out.scalar = c;
  out.linear = std::move(ell);
  return out;
}

// Certified membership data for one point: the directional derivative there
// is the scalar multiple of an exact (n-1)-st power of a linear form.
struct WfPoint {
  ProjPoint point;             // canonical representative
  Rational f_value;            // F at the canonical representative
  Rational scalar;             // c with D_p F = c * ell^{n-1}
  std::vector<Rational> ell;   // canonical linear form coefficients
};

inline std::optional<WfPoint> is_wf_member(const Form& f, const ProjPoint& p) {
  require(f.degree() >= 3, ErrorCode::degree_too_low,
          "membership test needs degree >= 3");
  require(p.dim() == f.num_vars(), ErrorCode::dimension_mismatch,
          "point dimension differs from variable count");
  ProjPoint cp = p.canonical();
  Form g = directional_derivative(f, cp.coords());
  if (g.is_zero()) return std::nullopt;
  PurePowerResult pp = pure_power_test(g);
  if (!pp.is_pure_power) return std::nullopt;
  return WfPoint{cp, evaluate(f, cp.coords()), *pp.scalar, *pp.linear};
}

// Extend the given vectors to a basis using kernel vectors of ell, greedily
// and deterministically.
inline std::vector<std::vector<Rational>> extend_in_kernel(
    const std::vector<std::vector<Rational>>& start,
    const std::vector<std::vector<Rational>>& kernel, int target) {
  std::vector<std::vector<Rational>> cols = start;
  auto rank_of = [&](const std::vector<std::vector<Rational>>& vs) {
    Matrix m(static_cast<int>(vs.size()), static_cast<int>(vs.front().size()));
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j)
        m.at(i, j) = vs[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return matrix_rank(m);
  };
  for (const auto& k : kernel) {
    if (static_cast<int>(cols.size()) == target) break;
    auto trial = cols;
    trial.push_back(k);
    if (rank_of(trial) == static_cast<int>(trial.size())) cols = std::move(trial);
  }
  require(static_cast<int>(cols.size()) == target,
          ErrorCode::internal_check_failed, "kernel completion fell short");
  return cols;
}

inline LinearChange change_from_columns(
    const std::vector<std::vector<Rational>>& cols) {
  const int n = static_cast<int>(cols.size());
  std::vector<std::vector<Rational>> rows(
      static_cast<std::size_t>(n),
      std::vector<Rational>(static_cast<std::size_t>(n)));
  for (int j = 0; j < n; ++j) {
    require(static_cast<int>(cols[static_cast<std::size_t>(j)].size()) == n,
            ErrorCode::bad_shape, "column length mismatch");
    for (int i = 0; i < n; ++i)
      rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
  }
  return LinearChange(std::move(rows));
}

struct NormalFormResult {
  std::string case_tag;   // "nonvanishing" or "vanishing"
  LinearChange change;    // substitution bringing F to the normal shape
  Rational leading;       // coefficient of x_0^n, resp. of x_0 x_1^{n-1}
  Form transformed;       // F after the substitution, expanded exactly
  Form residual;          // the x_0-free remainder G
};

// Bring F into normal shape around a certified point. Where F(p) != 0 the
// result is leading * x_0^n + G(x_1..x_b); where F(p) = 0 it is
// leading * x_0 x_1^{n-1} + G(x_1..x_b) with deg_{x_1} G <= n-2. Both shapes
// are verified by exact expansion before returning.
inline NormalFormResult normal_form_at(const Form& f, const WfPoint& seed) {
  const int n = f.degree(), vars = f.num_vars();
  require(n >= 3, ErrorCode::degree_too_low, "normal form needs degree >= 3");
  auto member = is_wf_member(f, seed.point);
  require(member.has_value(), ErrorCode::not_wf_member,
          "normal form needs a certified membership point");
  const WfPoint& wf = *member;
  const auto& p = wf.point.coords();
  Rational ell_at_p(0);
  for (int i = 0; i < vars; ++i)
    ell_at_p += wf.ell[static_cast<std::size_t>(i)] * p[static_cast<std::size_t>(i)];
  Matrix ell_row(1, vars);
  for (int i = 0; i < vars; ++i) ell_row.at(0, i) = wf.ell[static_cast<std::size_t>(i)];
  auto kernel = nullspace(ell_row);

  if (!is_zero(wf.f_value)) {
    require(!is_zero(ell_at_p), ErrorCode::internal_check_failed,
            "nonvanishing case expects ell(p) != 0");
    std::vector<std::vector<Rational>> cols = {p};
    for (const auto& k : kernel) cols.push_back(k);
    require(static_cast<int>(cols.size()) == vars,
            ErrorCode::internal_check_failed, "kernel basis has wrong size");
    LinearChange a = change_from_columns(cols);
    Form transformed = apply_change(f, a);
    Rational leading = wf.scalar *
                       rational_pow(ell_at_p, static_cast<unsigned>(n - 1)) /
                       Rational(n);
    Form residual(vars, n);
    for (const auto& [mono, c] : transformed.terms()) {
      if (mono[0] == 0) {
        residual.add_term(mono, c);
      } else {
        require(mono[0] == n, ErrorCode::internal_check_failed,
                "unexpected mixed term in the nonvanishing normal shape");
        require(c == leading, ErrorCode::internal_check_failed,
                "leading coefficient does not match the certificate");
      }
    }
    return NormalFormResult{"nonvanishing", a, leading, transformed, residual};
  }

  // F(p) = 0: then ell(p) = 0 and p itself lies in the kernel of ell.
  require(is_zero(ell_at_p), ErrorCode::internal_check_failed,
          "vanishing case expects ell(p) = 0");
  int wi = -1;
  for (int i = 0; i < vars && wi < 0; ++i)
    if (!is_zero(wf.ell[static_cast<std::size_t>(i)])) wi = i;
  require(wi >= 0, ErrorCode::internal_check_failed, "zero linear form");
  std::vector<Rational> w(static_cast<std::size_t>(vars), Rational(0));
  w[static_cast<std::size_t>(wi)] = Rational(1) / wf.ell[static_cast<std::size_t>(wi)];
  auto cols = extend_in_kernel({p, w}, kernel, vars);
  LinearChange a = change_from_columns(cols);
  Form first = apply_change(f, a);
  // first = scalar * x_0 x_1^{n-1} + G(x_1..x_b). Shift x_0 by the linear
  // form carried by the x_1^{n-1} terms of G to push deg_{x_1} G below n-1.
  Rational c = wf.scalar;
  std::vector<Rational> shift(static_cast<std::size_t>(vars), Rational(0));
  for (const auto& [mono, coef] : first.terms()) {
    if (mono[0] != 0) continue;
    if (mono[1] == n) shift[1] = coef / c;
    if (mono[1] == n - 1) {
      for (int j = 2; j < vars; ++j)
        if (mono[j] == 1) shift[static_cast<std::size_t>(j)] = coef / c;
    }
  }
  std::vector<std::vector<Rational>> brows(
      static_cast<std::size_t>(vars),
      std::vector<Rational>(static_cast<std::size_t>(vars), Rational(0)));
  for (int i = 0; i < vars; ++i) brows[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
  for (int j = 1; j < vars; ++j)
    brows[0][static_cast<std::size_t>(j)] = -shift[static_cast<std::size_t>(j)];
  LinearChange b(std::move(brows));
  LinearChange total = a.compose(b);
  Form transformed = apply_change(f, total);
  Form residual(vars, n);
  for (const auto& [mono, coef] : transformed.terms()) {
    if (mono[0] == 0) {
      require(mono[1] <= n - 2, ErrorCode::internal_check_failed,
              "residual keeps too high a power of x_1");
      residual.add_term(mono, coef);
    } else {
      require(mono[0] == 1 && mono[1] == n - 1 && coef == c,
              ErrorCode::internal_check_failed,
              "vanishing normal shape has an unexpected term");
    }
  }
  return NormalFormResult{"vanishing", total, c, transformed, residual};
}

}  // namespace cupform
