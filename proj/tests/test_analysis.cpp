#include <catch2/catch_amalgamated.hpp>

#include "checks.hpp"
#include "cupform/analysis.hpp"

using namespace cupform;
using testutil::code_of;

namespace {

// 1/2 x0 x1^2 + x1 x3 x4 + 1/2 x2 x3^2: honest, yet the symbolic 5x5
// derivative matrix has identically zero determinant.
Form degenerate_cubic() {
  Form f(5, 3);
  f.add_term(Monomial({1, 2, 0, 0, 0}), make_rational(1, 2));
  f.add_term(Monomial({0, 1, 0, 1, 1}), Rational(1));
  f.add_term(Monomial({0, 0, 1, 2, 0}), make_rational(1, 2));
  return f;
}

Form fermat(int vars, int degree) {
  Form f(vars, degree);
  for (int i = 0; i < vars; ++i)
    f.add_term(Monomial::unit(vars, i, degree), Rational(1));
  return f;
}

Form pure_cube_sum() {
  // (x0 + x1)^3 written out
  Form f(2, 3);
  f.add_term(Monomial({3, 0}), Rational(1));
  f.add_term(Monomial({2, 1}), Rational(3));
  f.add_term(Monomial({1, 2}), Rational(3));
  f.add_term(Monomial({0, 3}), Rational(1));
  return f;
}

std::mt19937_64 g_rng(31);

}  // namespace

TEST_CASE("coefficient tensor carries factorial weights") {
  Form f(2, 3);
  f.add_term(Monomial({2, 1}), Rational(1));
  CoeffTensor ct = coeff_tensor(f);
  CHECK(ct.tensor.shape() == std::vector<int>({2, 2, 2}));
  // exponent (2,1): multiplicity 2! * 1! = 2 at every index permutation
  CHECK(ct.tensor.at({0, 0, 1}) == Rational(2));
  CHECK(ct.tensor.at({0, 1, 0}) == Rational(2));
  CHECK(ct.tensor.at({1, 0, 0}) == Rational(2));
  CHECK(ct.tensor.at({0, 0, 0}) == Rational(0));
}

TEST_CASE("derivative hypermatrix at a point") {
  Form f = fermat(3, 3);
  HyperTensor h = hessian_at(f, ProjPoint::basis(3, 0));
  CHECK(h.shape() == std::vector<int>({3, 3}));
  CHECK(h.at({0, 0}) == Rational(6));
  CHECK(h.at({1, 1}) == Rational(0));
  CHECK(code_of([&] { hessian_at(Form(2, 2), ProjPoint::basis(2, 0)); }) ==
        ErrorCode::degree_too_low);
}

TEST_CASE("full contraction recovers the form value") {
  for (int it = 0; it < 40; ++it) {
    std::uniform_int_distribution<int> deg(3, 5);
    std::uniform_int_distribution<int> vars(1, 4);
    int n = deg(g_rng), v = vars(g_rng);
    Form f = testutil::random_form(v, n, g_rng);
    ProjPoint p = testutil::random_point(v, g_rng);
    HyperTensor h = hessian_at(f, p);
    while (h.order() > 1) h = contract_axis(h, h.order() - 1, p.coords());
    Rational total(0);
    for (int i = 0; i < v; ++i)
      total = h.at({i}) * p.coords()[static_cast<std::size_t>(i)] + total;
    CHECK(total == Rational(integer_factorial(static_cast<unsigned>(n))) *
                       evaluate(f, p.coords()));
  }
}

TEST_CASE("symbolic hypermatrix matches the displayed rows") {
  Form f = degenerate_cubic();
  FormTensor st = hessian_symbolic(f);
  CHECK(st.shape == std::vector<int>({5, 5}));

  auto var = [](int i) {
    std::vector<Rational> c(5, Rational(0));
    c[static_cast<std::size_t>(i)] = Rational(1);
    return Form::linear(c);
  };
  Form zero(5, 1);
  // row 1 of the matrix: (x1, x0, 0, x4, x3)
  CHECK(st.at({1, 0}) == var(1));
  CHECK(st.at({1, 1}) == var(0));
  CHECK(st.at({1, 2}) == zero);
  CHECK(st.at({1, 3}) == var(4));
  CHECK(st.at({1, 4}) == var(3));
  // symmetry
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < i; ++j) CHECK(st.at({i, j}) == st.at({j, i}));
  // evaluating the symbolic entries agrees with the numeric hypermatrix
  ProjPoint p = testutil::random_point(5, g_rng);
  HyperTensor h = hessian_at(f, p);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      CHECK(h.at({i, j}) == evaluate(st.at({i, j}), p.coords()));
}

TEST_CASE("honesty") {
  CHECK(honest(degenerate_cubic()).honest);
  CHECK(honest(fermat(4, 3)).honest);

  HonestyResult r = honest(pure_cube_sum());
  CHECK(!r.honest);
  REQUIRE(r.witness);
  // the witness direction kills the whole hypermatrix
  CHECK(hessian_at(pure_cube_sum(), ProjPoint(*r.witness)).is_zero());
}

TEST_CASE("degeneracy certificates") {
  NondegeneracyResult deg = nondegenerate(degenerate_cubic());
  CHECK(deg.status == TriState::no);
  REQUIRE(deg.certificate_form);
  CHECK(deg.certificate_form->is_zero());

  NondegeneracyResult good = nondegenerate(fermat(3, 3));
  CHECK(good.status == TriState::yes);
  REQUIRE(good.witness);
  CHECK(same_point(*good.witness,
                   ProjPoint({Rational(1), Rational(1), Rational(1)})));
  REQUIRE(good.certificate_form);
  CHECK(!is_zero(evaluate(*good.certificate_form, good.witness->coords())));

  // no determinant theory wired up for order-4 hypermatrices on 3+ variables
  CHECK(nondegenerate(fermat(3, 4)).status == TriState::inconclusive);
}

TEST_CASE("pure power detection") {
  PurePowerResult yes = pure_power_test(pure_cube_sum());
  CHECK(yes.is_pure_power);
  CHECK(*yes.scalar == Rational(1));
  CHECK(*yes.linear == std::vector<Rational>({Rational(1), Rational(1)}));

  // (2 x0 + 4 x1)^3 = 8 (x0 + 2 x1)^3
  Form f(2, 3);
  f.add_term(Monomial({3, 0}), Rational(8));
  f.add_term(Monomial({2, 1}), Rational(48));
  f.add_term(Monomial({1, 2}), Rational(96));
  f.add_term(Monomial({0, 3}), Rational(64));
  PurePowerResult scaled = pure_power_test(f);
  CHECK(scaled.is_pure_power);
  CHECK(*scaled.scalar == Rational(8));
  CHECK(*scaled.linear == std::vector<Rational>({Rational(1), Rational(2)}));

  CHECK(!pure_power_test(fermat(2, 3)).is_pure_power);
  Form m(2, 3);
  m.add_term(Monomial({2, 1}), Rational(1));
  CHECK(!pure_power_test(m).is_pure_power);
  // a power of a linear form with zero leading variable
  Form tail(3, 4);
  tail.add_term(Monomial({0, 0, 4}), Rational(5));
  PurePowerResult t = pure_power_test(tail);
  CHECK(t.is_pure_power);
  CHECK(*t.linear ==
        std::vector<Rational>({Rational(0), Rational(0), Rational(1)}));
}

TEST_CASE("membership certificates") {
  Form f = fermat(3, 3);
  auto w = is_wf_member(f, ProjPoint::basis(3, 1));
  REQUIRE(w);
  CHECK(w->f_value == Rational(1));
  CHECK(!is_zero(w->scalar));
  // D_p F must expand to c * ell^{n-1}
  Form lhs = directional_derivative(f, w->point.coords());
  Form rhs = form_pow(Form::linear(w->ell), 2) * w->scalar;
  CHECK(lhs == rhs);

  CHECK(!is_wf_member(f, ProjPoint({Rational(1), Rational(1), Rational(1)})));
  CHECK(!is_wf_member(f, ProjPoint({Rational(1), Rational(-1), Rational(0)})));

  // scaled input points map to one canonical witness
  auto s = is_wf_member(f, ProjPoint({Rational(0), Rational(-3), Rational(0)}));
  REQUIRE(s);
  CHECK(s->point.coords() ==
        std::vector<Rational>({Rational(0), Rational(1), Rational(0)}));
  CHECK(s->f_value == Rational(1));
}

TEST_CASE("membership agrees with the direct rank test") {
  for (int it = 0; it < 200; ++it) {
    std::uniform_int_distribution<int> deg(3, 4);
    std::uniform_int_distribution<int> vars(2, 4);
    int v = vars(g_rng);
    Form f = testutil::random_form(v, deg(g_rng), g_rng);
    ProjPoint p = testutil::random_point(v, g_rng);
    HyperTensor h = hessian_at(f, p);
    bool direct = !h.is_zero() && is_rank_le_one(h);
    CHECK(is_wf_member(f, p).has_value() == direct);
  }
}

TEST_CASE("normal form at a nonvanishing point") {
  Form f = fermat(3, 3);
  auto w = is_wf_member(f, ProjPoint::basis(3, 0));
  REQUIRE(w);
  NormalFormResult nf = normal_form_at(f, *w);
  CHECK(nf.case_tag == "nonvanishing");
  // independent recomputation of the substitution
  CHECK(apply_change(f, nf.change) == nf.transformed);
  // shape: leading * x0^3 plus a residual free of x0
  Form expect = nf.residual;
  expect.add_term(Monomial::unit(3, 0, 3), nf.leading);
  CHECK(nf.transformed == expect);
  for (const auto& [m, c] : nf.residual.terms()) {
    CHECK(m[0] == 0);
    (void)c;
  }
  CHECK(!is_zero(nf.leading));
}

TEST_CASE("normal form at a vanishing point") {
  Form f = degenerate_cubic();
  ProjPoint conic({Rational(1), Rational(0), Rational(1), Rational(0),
                   Rational(1)});
  auto w = is_wf_member(f, conic);
  REQUIRE(w);
  CHECK(w->f_value == Rational(0));
  NormalFormResult nf = normal_form_at(f, *w);
  CHECK(nf.case_tag == "vanishing");
  CHECK(apply_change(f, nf.change) == nf.transformed);
  // shape: c * x0 x1^2 plus a residual free of x0 with x1-degree <= 1
  Form expect = nf.residual;
  expect.add_term(Monomial({1, 2, 0, 0, 0}), nf.leading);
  CHECK(nf.transformed == expect);
  for (const auto& [m, c] : nf.residual.terms()) {
    CHECK(m[0] == 0);
    CHECK(m[1] <= 1);
    (void)c;
  }
}

TEST_CASE("normal form rejects outsiders") {
  Form f = fermat(3, 3);
  WfPoint fake{ProjPoint({Rational(1), Rational(1), Rational(1)}), Rational(3),
               Rational(1), {Rational(1), Rational(0), Rational(0)}};
  CHECK(code_of([&] { normal_form_at(f, fake); }) == ErrorCode::not_wf_member);
}
