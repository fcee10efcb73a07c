// Serialize a certificate, read it back, tamper with it.
#include <iostream>

#include "idemfact/idemfact.hpp"

int main() {
  using namespace idem;
  RingSpec R = make_ring(5);
  QuadInt x = parse_element(R, "3+2*w");
  QuadInt y = parse_element(R, "(4,-1)");

  Certificate c = factor_singular_row(x, y).cert;
  std::string text = to_json(c).dump();
  ParsedCertificate back = certificate_from_string(text);
  std::cout << "round trip: " << (verify(back.data) ? "ok" : "broken") << "\n";

  back.data.idempotents.front() = QuadInt(R, 2) * Mat2::identity(R);
  VerifyReport rep = verify_report(back.data);
  std::cout << "tampered: " << (rep.ok ? "accepted?!" : "rejected, " + rep.message) << "\n";
  return rep.ok ? 1 : 0;
}
