#include <gtest/gtest.h>

#include "support.hpp"

using namespace idem;
using testsupport::Rng;

namespace {

// Random verified certificate: a chain certificate of a random unimodular row,
// or a scaled row with zero.
Certificate random_cert(Rng& rng, const RingSpec& R) {
  auto u = testsupport::random_unimodular(rng, R, static_cast<int>(rng.uniform(1, 4)), 3);
  if (rng.uniform(0, 3) == 0) return row_with_zero_cert(rng.element(R, 9));
  return unimodular_row_cert(u.x, u.y, u.z, u.w);
}

}  // namespace

TEST(Verify, Examples) {
  RingSpec R = make_ring(2);
  Mat2 e = Mat2::of(R, 1, -1, 0, 0);
  EXPECT_TRUE(verify(CertificateData{e, {}, {e}, {}, {}}));
  VerifyReport rep = verify_report(CertificateData{e, {}, {Mat2::of(R, 1, 1, 0, 1)}, {}, {}});
  EXPECT_FALSE(rep.ok);
  EXPECT_EQ(rep.failing_idempotent, 0);
  EXPECT_FALSE(verify(CertificateData{e, {}, {}, {}, {}}));
  rep = verify_report(CertificateData{e, {SL2Element(Mat2::of(R, 2, 0, 0, 1))}, {e}, {}, {}});
  EXPECT_EQ(rep.failing_conjugator, 0);
}

TEST(Verify, AssembleRejectsBadData) {
  RingSpec R = make_ring(2);
  try {
    Certificate::assemble({Mat2::of(R, 1, 0, 0, 0), {}, {Mat2::of(R, 0, 0, 0, 1)}, {}, {}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::VerificationFailed);
  }
}

TEST(Trivial, Examples) {
  RingSpec R = make_ring(3);
  Certificate z = cert_trivial(Mat2::zero(R));
  EXPECT_EQ(z.r(), 1);
  EXPECT_EQ(z.s(), 0);
  EXPECT_TRUE(verify(cert_trivial(Mat2::of(R, 1, -1, 0, 0))));
  try {
    cert_trivial(Mat2::of(R, 2, 0, 0, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotIdempotent);
  }
}

TEST(Conjugate, CountsAndValidity) {
  Rng rng(61);
  RingSpec R = make_ring(2);
  Certificate c = cert_trivial(Mat2::of(R, 1, 0, 0, 0));
  EXPECT_EQ(cert_conjugate(c, {}).s(), 0);
  EXPECT_EQ(cert_conjugate(c, {}).target(), c.target());
  for (long alpha : testsupport::all_alphas()) {
    RingSpec S = make_ring(alpha);
    for (int i = 0; i < 30; ++i) {
      Certificate base = random_cert(rng, S);
      std::vector<SL2Element> as;
      int n = static_cast<int>(rng.uniform(0, 3));
      for (int k = 0; k < n; ++k) as.emplace_back(testsupport::random_conjugator(rng, S, 4));
      Certificate d = cert_conjugate(base, as);
      EXPECT_TRUE(verify(d));
      EXPECT_EQ(d.s(), base.s() + n);
      EXPECT_EQ(d.r(), base.r());
      EXPECT_EQ(conjugate_seq(d.target(), as), base.target());
    }
  }
}

TEST(Multiply, KeepsShorterConjugatorList) {
  Rng rng(62);
  for (long alpha : testsupport::all_alphas()) {
    RingSpec R = make_ring(alpha);
    for (int i = 0; i < 30; ++i) {
      Certificate a = random_cert(rng, R), b = random_cert(rng, R);
      Certificate c = cert_multiply(a, b);
      EXPECT_TRUE(verify(c));
      EXPECT_EQ(c.target(), a.target() * b.target());
      EXPECT_EQ(c.r(), a.r() + b.r());
      EXPECT_EQ(c.s(), std::min(a.s(), b.s()));
      EXPECT_EQ(reconstruct_target(c.data()), c.target());
    }
  }
}

// Shapes (2, 5) x (3, 1) give (5, 1).
TEST(Multiply, CountRule) {
  RingSpec R = make_ring(2);
  Mat2 e = Mat2::of(R, 1, 0, 0, 0);
  std::vector<SL2Element> five, one{SL2Element(a12(QuadInt(R, 1)))};
  for (int k = 0; k < 5; ++k) five.emplace_back(a21(QuadInt(R, k)));
  Certificate m = cert_conjugate(Certificate::assemble({e, {}, {e, e}, {}, {}}), five);
  Certificate n = cert_conjugate(Certificate::assemble({e, {}, {e, e, e}, {}, {}}), one);
  ASSERT_EQ(m.r(), 2);
  ASSERT_EQ(m.s(), 5);
  ASSERT_EQ(n.r(), 3);
  ASSERT_EQ(n.s(), 1);
  Certificate c = cert_multiply(m, n);
  EXPECT_EQ(c.r(), 5);
  EXPECT_EQ(c.s(), 1);
  EXPECT_TRUE(verify(c));
  EXPECT_EQ(cert_multiply(cert_trivial(Mat2::identity(R)), c).target(), c.target());
}

TEST(LeftMul, Counts) {
  Rng rng(63);
  RingSpec R = make_ring(10);
  Certificate c = random_cert(rng, R);
  Certificate same = cert_left_mul_idempotents({}, c);
  EXPECT_EQ(same.r(), c.r());
  EXPECT_EQ(same.target(), c.target());
  for (int i = 0; i < 100; ++i) {
    Certificate base = random_cert(rng, R);
    auto [e1, e2] = scalar_pair(rng.nonzero(R, 9));
    Certificate d = cert_left_mul_idempotents({e1, e2}, base);
    EXPECT_TRUE(verify(d));
    EXPECT_EQ(d.r(), base.r() + 2);
    EXPECT_EQ(d.s(), base.s());
    EXPECT_EQ(d.target(), e1 * e2 * base.target());
  }
}

TEST(Json, RoundTrip) {
  Rng rng(64);
  for (long alpha : testsupport::all_alphas()) {
    RingSpec R = make_ring(alpha);
    for (int i = 0; i < 10; ++i) {
      Certificate c = cert_conjugate(random_cert(rng, R), {Mat2::of(R, 1, 2, 0, 1), a11(rng.element(R, 3))});
      c = c.with_flags(Flag::RestripOccurred).with_annotation("note");
      ParsedCertificate p = certificate_from_string(to_json(c).dump());
      EXPECT_TRUE(verify(p.data));
      EXPECT_EQ(p.data.target, c.target());
      EXPECT_EQ(p.data.r(), c.r());
      EXPECT_EQ(p.data.s(), c.s());
      EXPECT_EQ(p.declared_r, c.r());
      EXPECT_EQ(p.data.flags, c.flags());
      EXPECT_EQ(p.data.annotations, c.annotations());
      EXPECT_EQ(to_json(p.data), to_json(c));
    }
  }
}

TEST(Json, Malformed) {
  for (const char* text : {"", "{", "[]", "{\"ring\":{\"alpha\":2}}",
                           "{\"ring\":{\"alpha\":4},\"target\":[\"(1,0)\",\"(0,0)\",\"(0,0)\",\"(0,0)\"],"
                           "\"conjugators\":[],\"idempotents\":[],\"counts\":{\"r\":0,\"s\":0}}"}) {
    EXPECT_THROW(certificate_from_string(text), Error) << text;
  }
}

TEST(Flags, Names) {
  Flags f;
  EXPECT_TRUE(f.empty());
  f.set(Flag::MrsExceeded);
  f |= Flag::BudgetHit;
  EXPECT_EQ(f.to_string(), "BudgetHit|MrsExceeded");
  EXPECT_EQ(Flags::parse("RestripOccurred"), Flag::RestripOccurred);
  EXPECT_THROW(Flags::parse("Nope"), Error);
}
