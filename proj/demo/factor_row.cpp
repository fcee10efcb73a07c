// Factor [2 sqrt(10); 0 0] over Z[sqrt(10)] and print the pieces.
#include <iostream>

#include "idemfact/idemfact.hpp"

int main() {
  using namespace idem;
  RingSpec R = make_ring(10);
  QuadInt x(R, 2);
  QuadInt y = omega(R);

  FactorResult res = factor_singular_row(x, y);
  const Certificate& c = res.cert;
  std::cout << "target " << c.target().to_string() << "\n";
  std::cout << "r = " << c.r() << ", s = " << c.s() << (res.conforming() ? " (within 15/19)" : "") << "\n";
  for (const auto& e : c.conjugators()) std::cout << "  conj " << to_string(e) << "\n";
  for (const auto& a : c.idempotents()) std::cout << "  idem " << a.to_string() << "\n";
  for (const auto& p : res.trace.phases) std::cout << "  phase " << p << "\n";
  std::cout << (verify(c) ? "verified" : "NOT verified") << "\n";
}
