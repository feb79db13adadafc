#include <catch2/catch_amalgamated.hpp>

#include "checks.hpp"
#include "cupform/form.hpp"

using namespace cupform;
using testutil::code_of;

namespace {

Form two_cubes() {
  Form f(2, 3);
  f.add_term(Monomial({3, 0}), Rational(1));
  f.add_term(Monomial({0, 3}), Rational(1));
  return f;
}

}  // namespace

TEST_CASE("term bookkeeping") {
  Form f(2, 2);
  f.add_term(Monomial({2, 0}), Rational(1));
  f.add_term(Monomial({2, 0}), Rational(2));
  f.add_term(Monomial({1, 1}), Rational(5));
  f.add_term(Monomial({1, 1}), Rational(-5));
  CHECK(f.term_count() == 1);
  CHECK(f.coefficient(Monomial({2, 0})) == Rational(3));
  CHECK(f.coefficient(Monomial({1, 1})) == Rational(0));

  CHECK(code_of([&] { f.add_term(Monomial({1, 0}), Rational(1)); }) ==
        ErrorCode::degree_mismatch);
  CHECK(code_of([&] { f.add_term(Monomial({1, 1, 0}), Rational(1)); }) ==
        ErrorCode::dimension_mismatch);
}

TEST_CASE("printing uses the graded order") {
  Form f(2, 2);
  f.add_term(Monomial({0, 2}), Rational(2));
  f.add_term(Monomial({2, 0}), make_rational(1, 2));
  f.add_term(Monomial({1, 1}), Rational(-1));
  CHECK(f.str() == "1/2*x0^2 + -1*x0*x1 + 2*x1^2");
  CHECK(Form(3, 4).str() == "0");
}

TEST_CASE("arithmetic") {
  Form f = two_cubes();
  Form g = f + f;
  CHECK(g == f * Rational(2));
  CHECK((g - f) == f);
  CHECK((f * Rational(0)).is_zero());

  Form sum = Form::linear({Rational(1), Rational(1)});
  Form sq = sum * sum;
  CHECK(sq.coefficient(Monomial({1, 1})) == Rational(2));
  CHECK(form_pow(sum, 3).coefficient(Monomial({2, 1})) == Rational(3));
}

TEST_CASE("derivatives") {
  Form f(2, 3);
  f.add_term(Monomial({3, 0}), Rational(1));
  f.add_term(Monomial({1, 2}), Rational(1));
  Form d0 = partial_derivative(f, 0);
  CHECK(d0.coefficient(Monomial({2, 0})) == Rational(3));
  CHECK(d0.coefficient(Monomial({0, 2})) == Rational(1));
  CHECK(iterated_partial(f, {0, 1}) == iterated_partial(f, {1, 0}));
  CHECK(code_of([&] { partial_derivative(f, 2); }) ==
        ErrorCode::index_out_of_range);
}

TEST_CASE("scaling identity for homogeneous forms") {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 30; ++it) {
    Form f = testutil::random_form(3, 4, rng);
    // sum_i x_i dF/dx_i = deg * F, checked on a random point
    auto p = testutil::random_point(3, rng).coords();
    Rational total(0);
    for (int i = 0; i < 3; ++i)
      total += p[i] * evaluate(partial_derivative(f, i), p);
    CHECK(total == Rational(4) * evaluate(f, p));
  }
}

TEST_CASE("evaluation and directional derivative") {
  Form f = two_cubes();
  CHECK(evaluate(f, {Rational(2), Rational(-1)}) == Rational(7));
  // D_v F at x equals sum v_i dF/dx_i
  std::vector<Rational> v = {Rational(1), Rational(2)};
  Form dv = directional_derivative(f, v);
  CHECK(dv.coefficient(Monomial({2, 0})) == Rational(3));
  CHECK(dv.coefficient(Monomial({0, 2})) == Rational(6));
}

TEST_CASE("dropping and embedding variables") {
  Form f(3, 2);
  f.add_term(Monomial({1, 0, 1}), Rational(4));
  Form g = drop_variable(f, 1);
  CHECK(g.num_vars() == 2);
  CHECK(g.coefficient(Monomial({1, 1})) == Rational(4));
  CHECK(code_of([&] { drop_variable(f, 0); }) == ErrorCode::bad_shape);

  Form e = embed_variables(g, 4, 1);
  CHECK(e.num_vars() == 4);
  CHECK(e.coefficient(Monomial({0, 1, 0, 1})) == Rational(4));
}

TEST_CASE("projective points") {
  CHECK(code_of([] { ProjPoint({Rational(0), Rational(0)}); }) ==
        ErrorCode::zero_vector);
  ProjPoint p({Rational(0), Rational(-2), Rational(4)});
  auto c = p.canonical().coords();
  CHECK(c[0] == Rational(0));
  CHECK(c[1] == Rational(1));
  CHECK(c[2] == Rational(-2));
  CHECK(same_point(p, ProjPoint({Rational(0), Rational(1), Rational(-2)})));
  CHECK(!same_point(p, ProjPoint::basis(3, 1)));
  CHECK(canonical_less(ProjPoint::basis(3, 2), p) !=
        canonical_less(p, ProjPoint::basis(3, 2)));
}

TEST_CASE("linear change of variables") {
  // x0 = y0 + y1, x1 = y1
  LinearChange a({{Rational(1), Rational(1)}, {Rational(0), Rational(1)}});
  Form f = two_cubes();
  Form g = apply_change(f, a);
  Form expected(2, 3);
  expected.add_term(Monomial({3, 0}), Rational(1));
  expected.add_term(Monomial({2, 1}), Rational(3));
  expected.add_term(Monomial({1, 2}), Rational(3));
  expected.add_term(Monomial({0, 3}), Rational(2));
  CHECK(g == expected);

  CHECK(code_of([] {
          LinearChange({{Rational(1), Rational(2)}, {Rational(2), Rational(4)}});
        }) == ErrorCode::singular_matrix);
}

TEST_CASE("change composition and inverse") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> entry(-3, 3);
  auto random_change = [&]() {
    while (true) {
      std::vector<std::vector<Rational>> rows(3, std::vector<Rational>(3));
      for (auto& r : rows)
        for (auto& x : r) x = Rational(entry(rng));
      try {
        return LinearChange(rows);
      } catch (const Error&) {
      }
    }
  };
  for (int it = 0; it < 20; ++it) {
    Form f = testutil::random_form(3, 3, rng);
    LinearChange a = random_change();
    LinearChange b = random_change();
    CHECK(apply_change(f, a.compose(b)) == apply_change(apply_change(f, a), b));
    CHECK(apply_change(apply_change(f, a), a.inverse()) == f);
    auto p = testutil::random_point(3, rng);
    // substitution and point mapping are mutually inverse actions
    CHECK(evaluate(apply_change(f, a), p.coords()) ==
          evaluate(f, a.apply(p).coords()));
  }
}
