// Modify a one-class quartic along a curve and report the certified rank of
// the derivative hypermatrix at the exceptional basis point.

#include <iostream>

#include "cupform/cupform.hpp"

int main() {
  using namespace cupform;

  Form fx(1, 4);
  fx.add_term(Monomial({4}), Rational(1));
  Form r1(1, 1);
  r1.add_term(Monomial({1}), make_rational(1, 6));

  for (int a : {0, 1, -1, 5}) {
    Form fy = blowup_form(fx, BlowupSpec{1, make_rational(a, 24), {r1}});
    ExceptionalRankReport rep =
        exceptional_rank_report(fy, ProjPoint::basis(2, 0), 1);
    std::cout << "a = " << a << ": F_Y = " << fy.str() << "\n"
              << "  rank at e_0 >= " << rep.lower;
    if (rep.exact) std::cout << " (exactly " << *rep.exact << ")";
    std::cout << " via " << rep.method << "\n";
  }
  return 0;
}
