#pragma once

// Rational-integer number theory: Bezout, CRT, primality, factorization and
// the least-index prime search in an arithmetic progression.

#include <algorithm>
#include <span>
#include <vector>

#include "idemfact/error.hpp"
#include "idemfact/integer.hpp"

namespace idem {

struct BezoutResult {
  Int g;  ///< gcd, always >= 0
  Int u;
  Int v;  ///< u*a + v*b == g
};

/// Iterative extended Euclid with truncating division.
inline BezoutResult ext_gcd(const Int& a, const Int& b) {
  Int old_r = a, r = b;
  Int old_s = 1, s = 0;
  Int old_t = 0, t = 1;
  while (r != 0) {
    Int q;
    mpz_tdiv_q(q.get_mpz_t(), old_r.get_mpz_t(), r.get_mpz_t());
    Int tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  return {old_r, old_s, old_t};
}

/// Inverse of a modulo m (m >= 2); throws NotDivisible if none exists.
inline Int mod_inverse(const Int& a, const Int& m) {
  Int r;
  require(mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) != 0, ErrorKind::NotDivisible,
          a.get_str() + " is not invertible mod " + m.get_str());
  return r;
}

/// residue mod modulus with 0 <= residue < modulus.
class Congruence {
 public:
  Congruence() : residue_(0), modulus_(1) {}
  Congruence(const Int& residue, const Int& modulus) : modulus_(modulus) {
    require(modulus >= 1, ErrorKind::PreconditionViolated, "modulus must be >= 1");
    residue_ = mod_floor(residue, modulus);
  }

  const Int& residue() const { return residue_; }
  const Int& modulus() const { return modulus_; }
  bool satisfied_by(const Int& x) const { return mod_floor(x, modulus_) == residue_; }

  friend bool operator==(const Congruence&, const Congruence&) = default;

 private:
  Int residue_;
  Int modulus_;
};

inline Congruence crt(std::span<const Congruence> system) {
  Int r = 0;
  Int m = 1;
  for (const auto& c : system) {
    require(gcd(m, c.modulus()) == 1, ErrorKind::ModuliNotCoprime,
            "moduli " + m.get_str() + " and " + c.modulus().get_str() + " share a factor");
    if (c.modulus() == 1) continue;
    Int k = mod_floor((c.residue() - r) * mod_inverse(m, c.modulus()), c.modulus());
    r += m * k;
    m *= c.modulus();
  }
  return Congruence(r, m);
}

/// Baillie-PSW plus 64 Miller-Rabin rounds (GMP); exact below 2^64.
inline bool is_prime(const Int& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 64) > 0;
}

namespace detail {

// Brent's variant of Pollard rho; n must be odd and composite.
inline Int pollard_brent(const Int& n) {
  for (unsigned long c = 1;; ++c) {
    Int y = 2, x, g = 1, q = 1, ys;
    const unsigned long batch = 64;
    unsigned long r = 1;
    auto step = [&](const Int& v) {
      Int w = v * v + c;
      return mod_floor(w, n);
    };
    while (g == 1) {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = step(y);
      unsigned long k = 0;
      while (k < r && g == 1) {
        ys = y;
        for (unsigned long i = 0; i < std::min(batch, r - k); ++i) {
          y = step(y);
          q = mod_floor(q * abs_int(x - y), n);
        }
        g = gcd(q, n);
        k += batch;
      }
      r *= 2;
    }
    if (g == n) {
      do {
        ys = step(ys);
        g = gcd(abs_int(x - ys), n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

inline void factor_into(const Int& n, std::vector<Int>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  Int d = pollard_brent(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace detail

/// Distinct prime divisors of |n|, ascending.
inline std::vector<Int> prime_divisors(const Int& n) {
  require(n != 0, ErrorKind::ZeroHasNoFactorization, "0 has no prime factorization");
  Int m = abs_int(n);
  std::vector<Int> primes;
  for (unsigned long p = 2; p < 1000 && m > 1; p += (p == 2 ? 1 : 2)) {
    if (mpz_divisible_ui_p(m.get_mpz_t(), p) != 0) {
      primes.emplace_back(p);
      while (mpz_divisible_ui_p(m.get_mpz_t(), p) != 0) m /= p;
    }
  }
  detail::factor_into(m, primes);
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  return primes;
}

/// All positive divisors of |n| (n != 0), ascending.
inline std::vector<Int> positive_divisors(const Int& n) {
  Int m = abs_int(n);
  std::vector<Int> divs{Int(1)};
  for (const Int& p : prime_divisors(n)) {
    std::size_t base = divs.size();
    Int pk = 1;
    while (divides(p, m)) {
      m /= p;
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

struct DirichletHit {
  Int f;
  Int p;
};

/// Least f >= 0 such that p = A*f + B is a positive prime outside `forbidden`
/// and coprime to `coprime_to`. Scans f up to and including f_max.
inline DirichletHit dirichlet_prime_search(const Int& A, const Int& B, std::span<const Int> forbidden,
                                           const Int& coprime_to, const Int& f_max) {
  require(A != 0, ErrorKind::PreconditionViolated, "progression step must be nonzero");
  require(gcd(A, B) == 1, ErrorKind::GcdNotOne,
          "gcd(" + A.get_str() + ", " + B.get_str() + ") != 1");
  Int f = 0;
  if (A > 0 && B <= 0) f = floor_div(-B, A) + 1;
  for (; f <= f_max; ++f) {
    Int p = A * f + B;
    if (p <= 0) break;
    if (!is_prime(p)) continue;
    if (std::find(forbidden.begin(), forbidden.end(), p) != forbidden.end()) continue;
    if (gcd(p, coprime_to) != 1) continue;
    return {f, p};
  }
  fail(ErrorKind::BudgetExhausted, "no admissible prime " + A.get_str() + "*f + " + B.get_str() +
                                       " with f <= " + f_max.get_str());
}

}  // namespace idem
