#pragma once

// Thin helpers over GMP's mpz_class. Everything in the library is exact.

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

#include "idemfact/error.hpp"

namespace idem {

using Int = mpz_class;

inline Int abs_int(const Int& a) {
  Int r;
  mpz_abs(r.get_mpz_t(), a.get_mpz_t());
  return r;
}

/// Nonnegative gcd; gcd(0, 0) = 0.
inline Int gcd(const Int& a, const Int& b) {
  Int r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Int floor_div(const Int& a, const Int& b) {
  require(b != 0, ErrorKind::DivisionByZero, "floor_div by zero");
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

/// Least nonnegative residue of a modulo |m|.
inline Int mod_floor(const Int& a, const Int& m) {
  require(m != 0, ErrorKind::DivisionByZero, "mod by zero");
  Int r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline bool divides(const Int& d, const Int& n) {
  if (d == 0) return n == 0;
  return mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t()) != 0;
}

/// a / b, throwing NotDivisible when b does not divide a.
inline Int exact_quotient(const Int& a, const Int& b) {
  require(b != 0, ErrorKind::DivisionByZero, "exact_quotient by zero");
  require(divides(b, a), ErrorKind::NotDivisible, a.get_str() + " / " + b.get_str());
  Int q;
  mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Int isqrt(const Int& n) {
  Int r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

inline std::optional<Int> exact_sqrt(const Int& n) {
  if (n < 0) return std::nullopt;
  if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return std::nullopt;
  return isqrt(n);
}

/// Nearest integer to num/den; exact halves go toward zero.
inline Int round_half_toward_zero(const Int& num, const Int& den) {
  require(den != 0, ErrorKind::DivisionByZero, "rounding with zero denominator");
  Int n = num;
  Int d = den;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  Int fl = floor_div(n, d);
  Int twice_frac = 2 * (n - fl * d);
  if (twice_frac > d) return fl + 1;
  if (twice_frac < d) return fl;
  return n > 0 ? fl : Int(fl + 1);
}

inline Int pow_int(const Int& base, unsigned long exp) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

inline std::string to_string(const Int& a) { return a.get_str(); }

/// Decimal with optional leading sign; surrounding whitespace is not accepted.
inline Int parse_int(std::string_view text) {
  std::string s(text);
  bool ok = !s.empty();
  std::size_t start = (ok && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (start == s.size()) ok = false;
  for (std::size_t i = start; ok && i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') ok = false;
  }
  require(ok, ErrorKind::ParseError, "not an integer: '" + s + "'");
  if (s[0] == '+') s.erase(0, 1);
  return Int(s, 10);
}

inline long to_long(const Int& a) {
  require(a.fits_slong_p(), ErrorKind::PreconditionViolated, "integer too large: " + a.get_str());
  return a.get_si();
}

}  // namespace idem
