// Find and certify every rank-one point of a diagonal cubic, then reduce the
// form to normal position at one of them.

#include <iostream>

#include "cupform/cupform.hpp"

int main() {
  using namespace cupform;

  Form f(3, 3);
  for (int i = 0; i < 3; ++i) f.add_term(Monomial::unit(3, i, 3), Rational(1));
  std::cout << "F = " << f.str() << "\n";

  HonestyResult h = honest(f);
  std::cout << "honest: " << (h.honest ? "yes" : "no") << "\n";

  WfSearchResult found = wf_search(f, {});
  std::cout << "certified rank-one points (" << found.certified.size()
            << ", complete=" << (found.complete ? "yes" : "no") << "):\n";
  for (const WfPoint& w : found.certified) {
    std::cout << "  [";
    const auto& c = w.point.coords();
    for (std::size_t i = 0; i < c.size(); ++i)
      std::cout << (i ? " " : "") << to_string(c[i]);
    std::cout << "]  F = " << to_string(w.f_value) << "\n";
  }

  NormalFormResult nf = normal_form_at(f, found.certified.front());
  std::cout << "normal form at the first point (" << nf.case_tag
            << " case): " << nf.transformed.str() << "\n";
  return 0;
}
