// Short tour: build an operator, look at its order and jet hom, push it to
// distributions, and check the adjoint identity on a test section.

#include <iostream>

#include "jetcalc/jetcalc.hpp"

int main() {
  using namespace jetcalc;
  const std::size_t n = 1;

  NormalOperator op = parse_operator("dx^2 * [x^2]", n);
  std::cout << "normal form: " << to_string(op) << "\n";
  std::cout << "order: " << *op.order() << "\n";

  Poly x = Poly::variable(n, 0);
  std::cout << "delta_x: " << to_string(delta(x, op)) << "\n";

  JetHom h = factorize(op);
  FreeModuleElement s({parse_poly("x^3 - x", n)});
  std::cout << "f(J^2 s) = " << to_string(h(jet_prolong(2, s))) << ", D(s) = " << to_string(apply(op, s)) << "\n";

  Box box = Box::unit(n);
  TestSection t(box, 3, FreeModuleElement({parse_poly("1 + x", n)}));
  Distribution psi = Distribution::evaluation({Rational(1, 2)}, MultiIndex{1}) + Distribution::density({x * x});
  std::cout << "<D t, psi> = " << to_string(pair(apply_operator(op, t), psi))
            << ", <t, D' psi> = " << to_string(pair(t, transpose(op)(psi))) << "\n";
}
