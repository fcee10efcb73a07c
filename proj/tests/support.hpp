#pragma once

// Shared generators and independent oracles for the tests. Oracles here use
// plain long arithmetic or brute force; none of them call into the library's
// own number theory.

#include <cstdint>
#include <random>
#include <vector>

#include "idemfact/idemfact.hpp"

namespace testsupport {

using idem::Int;
using idem::QuadInt;
using idem::RingSpec;

inline const std::vector<long>& all_alphas() {
  static const std::vector<long> a{2, 3, 5, 13, 10, 15};
  return a;
}

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(gen); }
  QuadInt element(const RingSpec& R, long h) { return QuadInt::from_coords(R, uniform(-h, h), uniform(-h, h)); }
  QuadInt nonzero(const RingSpec& R, long h) {
    for (;;) {
      QuadInt z = element(R, h);
      if (!z.is_zero()) return z;
    }
  }
};

inline long naive_gcd(long a, long b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b) {
    long t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline bool trial_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// Product in (c1, c2) coordinates straight from w^2 = alpha (branch 2,3) or
// w^2 = w + (alpha-1)/4 (branch 1).
inline std::pair<long, long> formula_mul(long alpha, long a1, long a2, long b1, long b2) {
  if (alpha % 4 == 1) {
    long k = (alpha - 1) / 4;
    return {a1 * b1 + a2 * b2 * k, a1 * b2 + a2 * b1 + a2 * b2};
  }
  return {a1 * b1 + alpha * a2 * b2, a1 * b2 + a2 * b1};
}

// Entry-by-entry 2x2 product, no shortcuts.
inline idem::Mat2 mul_oracle(const idem::Mat2& A, const idem::Mat2& B) {
  return {A.p() * B.p() + A.q() * B.r(), A.p() * B.q() + A.q() * B.s(), A.r() * B.p() + A.s() * B.r(),
          A.r() * B.q() + A.s() * B.s()};
}

inline idem::Mat2 random_mat(Rng& rng, const RingSpec& R, long h) {
  return {rng.element(R, h), rng.element(R, h), rng.element(R, h), rng.element(R, h)};
}

inline idem::Conjugator random_conjugator(Rng& rng, const RingSpec& R, long h) {
  auto k = static_cast<idem::ConjKind>(rng.uniform(0, 3));
  return {k, rng.element(R, h)};
}

// Random SL2 word of elementary matrices.
inline idem::Mat2 random_sl2(Rng& rng, const RingSpec& R, int len, long h) {
  idem::Mat2 m = idem::Mat2::identity(R);
  for (int i = 0; i < len; ++i) {
    QuadInt a = rng.element(R, h);
    m = m * (i % 2 == 0 ? idem::upper(a) : idem::lower(a)).matrix();
  }
  return m;
}

// Random unimodular row with cofactors: first column of a random SL2 word.
struct UnimodRow {
  QuadInt x, y, z, w;
};
inline UnimodRow random_unimodular(Rng& rng, const RingSpec& R, int len = 4, long h = 3) {
  idem::Mat2 m = random_sl2(rng, R, len, h);
  return {m.p(), m.r(), m.q(), m.s()};
}

}  // namespace testsupport
