// Quintic threefold from its Newton polytope, the mirror relation, and the
// threefold closed form.
#include <iostream>

#include "ellgen.hpp"

int main() {
  using namespace ellgen;
  const reflexive_polytope quintic = make_reflexive({{4, -1, -1, -1},
                                                     {-1, 4, -1, -1},
                                                     {-1, -1, 4, -1},
                                                     {-1, -1, -1, 4},
                                                     {-1, -1, -1, -1}});
  const int N = 2;
  const mirror_report m = mirror_check(quintic, N);
  std::cout << "Ell(quintic) through q^" << N << ":\n" << series_to_tsv(m.ell);
  std::cout << "Ell(X) = " << m.sign << " * Ell(X*): " << (m.holds ? "yes" : "no") << "\n";
  const auto closed = threefold_formula(-200, N);
  std::cout << "threefold formula with e = -200: " << (first_difference(m.ell, closed) ? "no" : "yes") << "\n";
}
