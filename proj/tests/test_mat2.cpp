#include <gtest/gtest.h>

#include "support.hpp"

using namespace idem;
using testsupport::Rng;

TEST(Mat2, Basics) {
  Rng rng(41);
  RingSpec R = make_ring(2);
  for (int i = 0; i < 100; ++i) {
    QuadInt a = rng.element(R, 20);
    EXPECT_EQ(a12(a).matrix().det(), QuadInt(R, 1));
    EXPECT_TRUE(row_matrix(a, rng.element(R, 20)).det().is_zero());
    Mat2 M = testsupport::random_mat(rng, R, 20);
    EXPECT_EQ(Mat2::identity(R) * M, M);
    EXPECT_EQ(M * M.adjugate(), M.det() * Mat2::identity(R));
  }
}

TEST(Mat2, ProductMatchesEntrywiseOracle) {
  Rng rng(42);
  for (long alpha : testsupport::all_alphas()) {
    RingSpec R = make_ring(alpha);
    for (int i = 0; i < 200; ++i) {
      Mat2 A = testsupport::random_mat(rng, R, 20), B = testsupport::random_mat(rng, R, 20);
      EXPECT_EQ(A * B, testsupport::mul_oracle(A, B));
      EXPECT_EQ((A * B).det(), A.det() * B.det());
    }
  }
}

TEST(Mat2, Idempotents) {
  RingSpec R = make_ring(2);
  EXPECT_TRUE(is_idempotent(Mat2::of(R, 1, -1, 0, 0)));
  QuadInt z = parse_element(R, "5+w");
  EXPECT_TRUE(is_idempotent(Mat2(QuadInt(R, 1), QuadInt(R), QuadInt(R, 1) - z, QuadInt(R))));
  EXPECT_FALSE(is_idempotent(Mat2::of(R, 1, 1, 0, 1)));
  EXPECT_TRUE(is_idempotent(swap_idempotent(R)));
  auto [e1, e2] = scalar_pair(z);
  EXPECT_TRUE(e1.is_idempotent() && e2.is_idempotent());
  EXPECT_EQ(e1 * e2, Mat2(z, QuadInt(R), QuadInt(R), QuadInt(R)));
}

TEST(Conjugation, ClosedFormExample) {
  RingSpec R = make_ring(2);
  EXPECT_EQ(conjugate(Mat2::of(R, 1, 0, 1, 0), a11(QuadInt(R, 1))), Mat2::of(R, -1, -1, 2, 2));
  EXPECT_EQ(conjugate(row_matrix(QuadInt(R, 1), QuadInt(R)), a22(QuadInt(R))), Mat2::of(R, 0, 0, 0, 1));
  Mat2 M = Mat2::of(R, 3, 4, 5, 6);
  EXPECT_EQ(conjugate_seq(M, {}), M);
}

// (a 0; b 0)^{a11(u)} = (-bu -b; u(a+bu) a+bu)
TEST(Conjugation, ClosedFormRandom) {
  Rng rng(43);
  for (long alpha : testsupport::all_alphas()) {
    RingSpec R = make_ring(alpha);
    for (int i = 0; i < 200; ++i) {
      QuadInt a = rng.element(R, 20), b = rng.element(R, 20), u = rng.element(R, 20);
      Mat2 got = conjugate(Mat2(a, QuadInt(R), b, QuadInt(R)), a11(u));
      EXPECT_EQ(got, Mat2(-b * u, -b, u * (a + b * u), a + b * u));
    }
  }
}

TEST(Conjugation, DistributesOverProducts) {
  Rng rng(44);
  for (long alpha : testsupport::all_alphas()) {
    RingSpec R = make_ring(alpha);
    for (int i = 0; i < 100; ++i) {
      std::vector<Mat2> ms;
      for (int k = 0; k < 3; ++k) ms.push_back(testsupport::random_mat(rng, R, 10));
      std::vector<SL2Element> cs;
      for (int k = 0; k < 3; ++k) cs.emplace_back(testsupport::random_conjugator(rng, R, 5));
      Mat2 lhs = conjugate_seq(ms[0] * ms[1] * ms[2], cs);
      Mat2 rhs = conjugate_seq(ms[0], cs) * conjugate_seq(ms[1], cs) * conjugate_seq(ms[2], cs);
      EXPECT_EQ(lhs, rhs);
      EXPECT_EQ(unconjugate_seq(conjugate_seq(ms[0], cs), cs), ms[0]);
    }
  }
}

TEST(Conjugation, RowShiftAndExplicitInverse) {
  Rng rng(45);
  RingSpec R = make_ring(13);
  for (int i = 0; i < 200; ++i) {
    QuadInt x = rng.element(R, 20), y = rng.element(R, 20), e = rng.element(R, 20);
    EXPECT_EQ(conjugate(row_matrix(x, y), a12(e)), row_matrix(x, y + e * x));
    Conjugator c = testsupport::random_conjugator(rng, R, 9);
    Mat2 M = testsupport::random_mat(rng, R, 9);
    Mat2 C = c.matrix();
    EXPECT_EQ(C.det(), QuadInt(R, 1));
    EXPECT_EQ(conjugate(M, c), testsupport::mul_oracle(testsupport::mul_oracle(C.adjugate(), M), C));
  }
}

TEST(Conjugation, NotInSL2Rejected) {
  RingSpec R = make_ring(2);
  try {
    checked_sl2(SL2Element(Mat2::of(R, 2, 0, 0, 1)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotInSL2);
  }
}

TEST(RowMatrix, Examples) {
  RingSpec R = make_ring(2);
  EXPECT_EQ(row_matrix(QuadInt(R, 1), QuadInt(R)), Mat2::of(R, 1, 0, 0, 0));
  EXPECT_EQ(row_matrix(QuadInt(R), QuadInt(R)), Mat2::zero(R));
  EXPECT_EQ(row_matrix(omega(R), QuadInt(R, 3)), Mat2(omega(R), QuadInt(R, 3), QuadInt(R), QuadInt(R)));
}

TEST(SwapIdentity, Examples) {
  RingSpec R = make_ring(2);
  SwapIdentity s = swap_identity(QuadInt(R, 1), QuadInt(R));
  EXPECT_EQ(s.prefactor, Mat2::of(R, 0, 0, 1, 0));
  EXPECT_EQ(s.row, row_matrix(QuadInt(R), QuadInt(R, 1)));
  EXPECT_EQ(s.prefactor * s.row, Mat2::of(R, 0, 0, 0, 1));

  QuadInt y = parse_element(R, "2-w"), x = parse_element(R, "1+3*w");
  EXPECT_EQ(swap_identity(QuadInt(R), y).row, row_matrix(-y, QuadInt(R)));
  EXPECT_EQ(swap_identity(x, x).row, row_matrix(-x, x));
}

TEST(SwapIdentity, IdempotentReplacementAgreesOnRows) {
  Rng rng(46);
  for (long alpha : testsupport::all_alphas()) {
    RingSpec R = make_ring(alpha);
    for (int i = 0; i < 100; ++i) {
      QuadInt x = rng.element(R, 20), y = rng.element(R, 20);
      EXPECT_EQ(conjugate(row_matrix(x, y), a22(QuadInt(R))), swap_idempotent(R) * row_matrix(-y, x));
    }
  }
}
