#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cupform/analysis.hpp"
#include "cupform/error.hpp"
#include "cupform/form.hpp"
#include "cupform/search.hpp"
#include "cupform/tensor.hpp"

namespace cupform {

// Top intersection numbers of a basis of divisor classes: the value of
// h_0^{m_0} .. h_b^{m_b} for every degree-n monomial in the classes.
// Monomials absent from the map have value zero.
struct IntersectionData {
  int n = 0;           // top power, the degree of the associated form
  int basis_size = 0;  // number of classes
  std::map<Monomial, Rational, std::greater<Monomial>> values;
};

inline void validate(const IntersectionData& d) {
  require(d.n >= 1, ErrorCode::degree_too_low, "top power must be >= 1");
  require(d.basis_size >= 1, ErrorCode::bad_shape, "basis must be nonempty");
  for (const auto& [m, v] : d.values) {
    require(m.num_vars() == d.basis_size, ErrorCode::dimension_mismatch,
            "intersection monomial has wrong variable count");
    require(m.degree() == d.n, ErrorCode::degree_mismatch,
            "intersection monomial has wrong degree");
    (void)v;
  }
}

// The degree-n form whose coefficient on x^m is the multinomial weight of m
// times the intersection number of the matching monomial in the classes.
inline Form form_from_intersection(const IntersectionData& d) {
  validate(d);
  Form f(d.basis_size, d.n);
  Rational nfact(integer_factorial(static_cast<unsigned>(d.n)));
  for (const auto& [m, v] : d.values) {
    if (is_zero(v)) continue;
    Integer denom(1);
    for (int e : m.exponents())
      denom *= integer_factorial(static_cast<unsigned>(e));
    Rational weight = nfact / Rational(denom);
    Rational coeff = weight * v;
    f.add_term(m, coeff);
  }
  return f;
}

// Inverse of form_from_intersection; records only the nonzero values.
inline IntersectionData intersection_from_form(const Form& f) {
  require(f.degree() >= 1, ErrorCode::degree_too_low,
          "intersection data needs degree >= 1");
  IntersectionData d;
  d.n = f.degree();
  d.basis_size = f.num_vars();
  Rational nfact(integer_factorial(static_cast<unsigned>(d.n)));
  for (const auto& [m, c] : f.terms()) {
    Integer denom(1);
    for (int e : m.exponents())
      denom *= integer_factorial(static_cast<unsigned>(e));
    Rational value = c * Rational(denom) / nfact;
    d.values.emplace(m, value);
  }
  return d;
}

// The derivative hypermatrix of the associated form at the i-th coordinate
// point must equal n! times the slice of the intersection values through
// h_i. Checks that identity exactly.
inline bool hessian_basis_identity_check(const IntersectionData& d, int i) {
  validate(d);
  require(d.n >= 3, ErrorCode::degree_too_low, "identity check needs n >= 3");
  require(i >= 0 && i < d.basis_size, ErrorCode::index_out_of_range,
          "basis index out of range");
  Form f = form_from_intersection(d);
  HyperTensor h = hessian_at(f, ProjPoint::basis(d.basis_size, i));
  Rational nfact(integer_factorial(static_cast<unsigned>(d.n)));
  HyperTensor expected(
      std::vector<int>(static_cast<std::size_t>(d.n - 1), d.basis_size));
  for (std::size_t flat = 0; flat < expected.size(); ++flat) {
    auto idx = expected.multi_index(flat);
    std::vector<int> exps(static_cast<std::size_t>(d.basis_size), 0);
    ++exps[static_cast<std::size_t>(i)];
    for (int a : idx) ++exps[static_cast<std::size_t>(a)];
    auto it = d.values.find(Monomial(exps));
    if (it == d.values.end()) continue;
    expected.flat(flat) = nfact * it->second;
  }
  return h == expected;
}

inline bool hessian_basis_identity_check(const IntersectionData& d) {
  for (int i = 0; i < d.basis_size; ++i)
    if (!hessian_basis_identity_check(d, i)) return false;
  return true;
}

// Data describing a modification that inserts one exceptional class in front
// of the existing ones: the dimension k of the blown-up center, the top
// self-intersection coefficient a of the new class, and the lower-order
// correction forms R_1..R_m (R_i homogeneous of degree i in the old classes).
struct BlowupSpec {
  int k = 0;
  Rational a;
  std::vector<Form> R;
};

// a*x_0^n + sum_i x_0^{n-i} R_i(x_1..x_b) + F(x_1..x_b), one more variable
// in front.
inline Form blowup_form(const Form& f_x, const BlowupSpec& spec) {
  const int b = f_x.num_vars(), n = f_x.degree();
  require(b >= 1, ErrorCode::bad_shape, "base form needs a variable");
  require(n >= 2, ErrorCode::degree_too_low, "base form needs degree >= 2");
  require(spec.k >= 0, ErrorCode::bad_shape, "center dimension must be >= 0");
  require(static_cast<int>(spec.R.size()) <= n - 1, ErrorCode::bad_shape,
          "too many correction forms");
  Form out = embed_variables(f_x, b + 1, 1);
  out.add_term(Monomial::unit(b + 1, 0, n), spec.a);
  for (std::size_t i = 0; i < spec.R.size(); ++i) {
    const Form& r = spec.R[i];
    const int deg = static_cast<int>(i) + 1;
    require(r.num_vars() == b, ErrorCode::dimension_mismatch,
            "correction form has wrong variable count");
    require(r.degree() == deg, ErrorCode::degree_mismatch,
            "correction form R_i must have degree i");
    if (r.is_zero()) continue;
    Form x0pow(b + 1, n - deg);
    x0pow.add_term(Monomial::unit(b + 1, 0, n - deg), Rational(1));
    out += x0pow * embed_variables(r, b + 1, 1);
  }
  return out;
}

// Modification at a point: no correction forms, and the new class meets
// itself in (-1)^(n-1) by default.
inline Form blowup_point(const Form& f_x,
                         std::optional<Rational> a_override = {}) {
  Rational a = a_override.value_or(
      Rational(f_x.degree() % 2 == 1 ? 1 : -1));
  return blowup_form(f_x, BlowupSpec{0, a, {}});
}

struct ExceptionalRankReport {
  int k = 0;
  int lower = 0;               // certified lower bound on the rank at p
  std::optional<int> exact;    // exact rank when the shape allows it
  std::string method;
  int q = 0;                   // pencil data when k == 2
  int t = 0;
  int samples_checked = 0;
  bool caller_certified = false;
};

// Certified lower bounds for the rank of the derivative hypermatrix at the
// exceptional basis point e_0 of a modified form, per center dimension:
// k = 0 gives rank exactly 1, k = 1 gives rank >= 2 through a matrix slice,
// k = 2 gives rank >= 2q through a pencil of slices.
inline ExceptionalRankReport exceptional_rank_report(const Form& f_y,
                                                     const ProjPoint& p,
                                                     int k, int samples = 200,
                                                     std::uint64_t seed = 0) {
  const int vars = f_y.num_vars(), n = f_y.degree();
  require(vars >= 2, ErrorCode::bad_shape, "modified form needs >= 2 variables");
  require(same_point(p, ProjPoint::basis(vars, 0)), ErrorCode::bad_shape,
          "rank report expects the exceptional basis point");
  ExceptionalRankReport rep;
  rep.k = k;

  if (k == 0) {
    require(n >= 3, ErrorCode::degree_too_low, "rank report needs degree >= 3");
    auto wf = is_wf_member(f_y, p);
    require(wf.has_value() && !is_zero(wf->f_value), ErrorCode::bad_shape,
            "point modification expects a nonvanishing rank-one point");
    HyperTensor h = hessian_at(f_y, p);
    require(!h.is_zero() && is_rank_le_one(h), ErrorCode::internal_check_failed,
            "membership certificate disagrees with the hypermatrix rank");
    rep.lower = 1;
    rep.exact = 1;
    rep.method = "rank-one derivative hypermatrix";
    return rep;
  }

  if (k == 1) {
    require(n >= 3, ErrorCode::degree_too_low, "rank report needs degree >= 3");
    Matrix b(vars, vars);
    std::vector<int> prefix(static_cast<std::size_t>(n - 3), 0);
    for (int i = 0; i < vars; ++i)
      for (int j = 0; j < vars; ++j) {
        auto idx = prefix;
        idx.push_back(i);
        idx.push_back(j);
        b.at(i, j) = evaluate(iterated_partial(f_y, idx), p.coords());
      }
    int r = matrix_rank(b);
    require(r >= 2, ErrorCode::bad_shape,
            "curve modification expects a slice of rank >= 2");
    rep.lower = r;
    rep.method = "rank of the repeated-exceptional slice";
    HyperTensor h = hessian_at(f_y, p);
    if (h.order() == 2) rep.exact = matrix_rank(Matrix::from_tensor(h));
    else if (h.shape() == std::vector<int>({2, 2, 2})) rep.exact = rank_222(h);
    return rep;
  }

  require(k == 2, ErrorCode::bad_shape, "center dimension must be 0, 1 or 2");
  require(n >= 4, ErrorCode::degree_too_low,
          "surface modification needs degree >= 4");
  // Slices A_h[i][j] of the derivative hypermatrix at e_0, all other slots
  // pinned to the exceptional index.
  std::vector<int> prefix(static_cast<std::size_t>(n - 4), 0);
  std::vector<Matrix> slices;
  for (int h = 0; h < vars; ++h) {
    Matrix a(vars, vars);
    for (int i = 0; i < vars; ++i)
      for (int j = 0; j < vars; ++j) {
        auto idx = prefix;
        idx.push_back(h);
        idx.push_back(i);
        idx.push_back(j);
        a.at(i, j) = evaluate(iterated_partial(f_y, idx), p.coords());
      }
    slices.push_back(std::move(a));
  }
  // The quadric block: lower-right of A_0.
  Matrix gram(vars - 1, vars - 1);
  for (int i = 1; i < vars; ++i)
    for (int j = 1; j < vars; ++j) gram.at(i - 1, j - 1) = slices[0].at(i, j);
  int q = matrix_rank(gram);
  require(q >= 1, ErrorCode::bad_shape,
          "surface modification expects a nonzero quadric block");
  for (int h = 1; h < vars; ++h)
    for (int i = 1; i < vars; ++i)
      for (int j = 1; j < vars; ++j)
        require(is_zero(slices[static_cast<std::size_t>(h)].at(i, j)),
                ErrorCode::bad_shape,
                "trailing slices must be supported on the exceptional row "
                "and column");
  // Greedily pick q independent trailing slices.
  std::vector<Matrix> chosen = {slices[0]};
  std::vector<Matrix> picked;
  for (int h = 1; h < vars && static_cast<int>(picked.size()) < q; ++h) {
    auto trial = picked;
    trial.push_back(slices[static_cast<std::size_t>(h)]);
    if (matrix_rank(stack_as_rows(trial)) == static_cast<int>(trial.size()))
      picked = std::move(trial);
  }
  require(static_cast<int>(picked.size()) == q, ErrorCode::bad_shape,
          "could not find enough independent trailing slices");
  for (auto& m : picked) chosen.push_back(std::move(m));
  LemmaTrickResult lt = lemma_trick_bound(
      chosen, q >= 2 ? std::optional<int>(q) : std::nullopt, samples, seed);
  require(lt.bound >= 2 * q, ErrorCode::internal_check_failed,
          "pencil bound fell below twice the quadric rank");
  rep.lower = lt.bound;
  rep.q = lt.q;
  rep.t = lt.t;
  rep.samples_checked = lt.samples_checked;
  rep.caller_certified = !lt.exact_t;
  rep.method = "pencil of exceptional slices";
  return rep;
}

// Candidate classes whose derivative hypermatrix drops to rank one and whose
// value is nonzero: at most one per basis class of the cohomology.
struct CandidateSet {
  int cap = 0;
  bool complete = false;
  std::vector<WfPoint> points;
  std::vector<NumericCandidate> numeric_only;
};

inline CandidateSet candidate_exceptionals(const Form& f,
                                           const WfSearchConfig& cfg = {}) {
  WfSearchResult search = wf_search(f, cfg);
  CandidateSet out;
  out.cap = f.num_vars();
  out.complete = search.complete;
  for (const WfPoint& w : search.certified)
    if (!is_zero(w.f_value)) out.points.push_back(w);
  require(static_cast<int>(out.points.size()) <= out.cap,
          ErrorCode::internal_check_failed,
          "candidate count exceeded the basis cap");
  out.numeric_only = std::move(search.numeric_only);
  return out;
}

inline CandidateSet candidate_exceptionals(const IntersectionData& d,
                                           const WfSearchConfig& cfg = {}) {
  return candidate_exceptionals(form_from_intersection(d), cfg);
}

}  // namespace cupform
