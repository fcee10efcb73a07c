#pragma once

// Exact arithmetic in the ring of integers O_k of k = Q(sqrt(alpha)).
//
// Elements are stored in half-coordinates (u + v*sqrt(alpha))/2 for both
// integral bases. When alpha = 2,3 (mod 4) the basis is {1, sqrt(alpha)} and
// u, v are both even; when alpha = 1 (mod 4) the basis is {1, w} with
// w = (1 + sqrt(alpha))/2 and u = v (mod 2). "Coordinates" (c1, c2) are
// the coefficients on {1, w} resp. {1, sqrt(alpha)}: element = c1 + c2*w.

#include <cctype>
#include <ostream>
#include <string>
#include <string_view>

#include "idemfact/error.hpp"
#include "idemfact/integer.hpp"

namespace idem {

enum class Branch { One, TwoThree };

class RingSpec {
 public:
  /// Validates alpha: >= 2, square-free (hence not 0 mod 4).
  static RingSpec make(const Int& alpha) {
    require(alpha >= 2, ErrorKind::NotPositive, "alpha must be a positive integer >= 2, got " + alpha.get_str());
    require(alpha.fits_slong_p(), ErrorKind::PreconditionViolated, "alpha too large");
    long a = alpha.get_si();
    for (long p = 2; p * p <= a; ++p) {
      require(a % (p * p) != 0, ErrorKind::NotSquareFree,
              "alpha not square-free: " + std::to_string(p * p) + " divides " + std::to_string(a));
    }
    require(a % 4 != 0, ErrorKind::AlphaIsOneModFourZero, "alpha = 0 mod 4");
    return RingSpec(a);
  }

  long alpha() const { return alpha_; }
  Branch branch() const { return branch_; }
  bool is_one_mod_four() const { return branch_ == Branch::One; }
  Int discriminant() const { return branch_ == Branch::One ? Int(alpha_) : Int(4 * alpha_); }
  /// (alpha - 1)/4 for branch One: w^2 = w + omega_shift().
  long omega_shift() const { return (alpha_ - 1) / 4; }

  std::string omega_description() const {
    std::string root = "sqrt(" + std::to_string(alpha_) + ")";
    return branch_ == Branch::One ? "(1+" + root + ")/2" : root;
  }

  friend bool operator==(const RingSpec&, const RingSpec&) = default;

 private:
  explicit RingSpec(long alpha) : alpha_(alpha), branch_(alpha % 4 == 1 ? Branch::One : Branch::TwoThree) {}

  long alpha_;
  Branch branch_;
};

inline RingSpec make_ring(const Int& alpha) { return RingSpec::make(alpha); }

struct Coords {
  Int c1;
  Int c2;
  friend bool operator==(const Coords&, const Coords&) = default;
};

class QuadInt {
 public:
  /// The rational integer n.
  QuadInt(const RingSpec& ring, const Int& n = 0) : ring_(ring), u_(2 * n), v_(0) {}

  static QuadInt from_half(const RingSpec& ring, const Int& u, const Int& v) {
    bool ok = ring.is_one_mod_four() ? mpz_even_p(Int(u - v).get_mpz_t()) != 0
                                     : (mpz_even_p(u.get_mpz_t()) != 0 && mpz_even_p(v.get_mpz_t()) != 0);
    require(ok, ErrorKind::NotDivisible,
            "(" + u.get_str() + " + " + v.get_str() + "*sqrt(" + std::to_string(ring.alpha()) +
                "))/2 is not an algebraic integer of this ring");
    QuadInt q(ring);
    q.u_ = u;
    q.v_ = v;
    return q;
  }

  static QuadInt from_coords(const RingSpec& ring, const Int& c1, const Int& c2) {
    if (ring.is_one_mod_four()) return from_half(ring, 2 * c1 + c2, c2);
    return from_half(ring, 2 * c1, 2 * c2);
  }

  Coords coords() const {
    if (ring_.is_one_mod_four()) return {Int((u_ - v_) / 2), v_};
    return {Int(u_ / 2), Int(v_ / 2)};
  }

  const RingSpec& ring() const { return ring_; }
  const Int& half_u() const { return u_; }
  const Int& half_v() const { return v_; }

  bool is_zero() const { return u_ == 0 && v_ == 0; }
  bool is_rational() const { return v_ == 0; }
  /// Value of a rational element; throws if the element is irrational.
  Int rational_value() const {
    require(is_rational(), ErrorKind::PreconditionViolated, "element " + to_pair_string() + " is not rational");
    return u_ / 2;
  }

  QuadInt conj() const { return from_raw(ring_, u_, -v_); }
  Int trace() const { return u_; }
  Int norm() const {
    Int n = u_ * u_ - Int(ring_.alpha()) * v_ * v_;
    return n / 4;
  }
  bool is_unit() const { return abs_int(norm()) == 1; }

  QuadInt operator-() const { return from_raw(ring_, -u_, -v_); }

  friend QuadInt operator+(const QuadInt& a, const QuadInt& b) {
    check_same(a, b);
    return from_raw(a.ring_, a.u_ + b.u_, a.v_ + b.v_);
  }
  friend QuadInt operator-(const QuadInt& a, const QuadInt& b) {
    check_same(a, b);
    return from_raw(a.ring_, a.u_ - b.u_, a.v_ - b.v_);
  }
  friend QuadInt operator*(const QuadInt& a, const QuadInt& b) {
    check_same(a, b);
    Int u = a.u_ * b.u_ + Int(a.ring_.alpha()) * a.v_ * b.v_;
    Int v = a.u_ * b.v_ + a.v_ * b.u_;
    return from_raw(a.ring_, u / 2, v / 2);
  }
  friend QuadInt operator*(const Int& k, const QuadInt& a) { return from_raw(a.ring_, k * a.u_, k * a.v_); }
  friend QuadInt operator*(const QuadInt& a, const Int& k) { return k * a; }

  QuadInt& operator+=(const QuadInt& b) { return *this = *this + b; }
  QuadInt& operator-=(const QuadInt& b) { return *this = *this - b; }
  QuadInt& operator*=(const QuadInt& b) { return *this = *this * b; }

  friend bool operator==(const QuadInt& a, const QuadInt& b) {
    return a.ring_ == b.ring_ && a.u_ == b.u_ && a.v_ == b.v_;
  }

  /// "(c1,c2)" in (c1, c2) coordinates; the serialization form.
  std::string to_pair_string() const {
    Coords p = coords();
    return "(" + p.c1.get_str() + "," + p.c2.get_str() + ")";
  }

  /// "c1+c2*w" with w the ring generator.
  std::string to_string() const {
    Coords p = coords();
    if (p.c2 == 0) return p.c1.get_str();
    std::string w = (abs_int(p.c2) == 1 ? std::string() : abs_int(p.c2).get_str() + "*") + "w";
    if (p.c1 == 0) return (p.c2 < 0 ? "-" : "") + w;
    return p.c1.get_str() + (p.c2 < 0 ? "-" : "+") + w;
  }

  friend std::ostream& operator<<(std::ostream& os, const QuadInt& a) { return os << a.to_string(); }

 private:
  static QuadInt from_raw(const RingSpec& ring, const Int& u, const Int& v) {
    QuadInt q(ring);
    q.u_ = u;
    q.v_ = v;
    return q;
  }
  static void check_same(const QuadInt& a, const QuadInt& b) {
    require(a.ring_ == b.ring_, ErrorKind::RingMismatch,
            "alpha " + std::to_string(a.ring_.alpha()) + " vs " + std::to_string(b.ring_.alpha()));
  }

  RingSpec ring_;
  Int u_;
  Int v_;
};

inline QuadInt from_coords(const RingSpec& ring, const Int& c1, const Int& c2) {
  return QuadInt::from_coords(ring, c1, c2);
}
inline Coords to_coords(const QuadInt& a) { return a.coords(); }

/// The ring generator w (sqrt(alpha), or (1+sqrt(alpha))/2 when alpha = 1 mod 4).
inline QuadInt omega(const RingSpec& ring) { return QuadInt::from_coords(ring, 0, 1); }

/// q with q*d == x, computed as x*conj(d)/norm(d).
inline QuadInt exact_div(const QuadInt& x, const QuadInt& d) {
  require(x.ring() == d.ring(), ErrorKind::RingMismatch, "exact_div across rings");
  require(!d.is_zero(), ErrorKind::DivisionByZero, "division by zero element");
  QuadInt num = x * d.conj();
  Int n = d.norm();
  require(divides(n, num.half_u()) && divides(n, num.half_v()), ErrorKind::NotDivisible,
          x.to_string() + " / " + d.to_string());
  return QuadInt::from_half(x.ring(), num.half_u() / n, num.half_v() / n);
}

inline std::optional<QuadInt> try_exact_div(const QuadInt& x, const QuadInt& d) {
  if (d.is_zero()) return std::nullopt;
  QuadInt num = x * d.conj();
  Int n = d.norm();
  if (!divides(n, num.half_u()) || !divides(n, num.half_v())) return std::nullopt;
  Int u = num.half_u() / n;
  Int v = num.half_v() / n;
  bool parity = x.ring().is_one_mod_four() ? mpz_even_p(Int(u - v).get_mpz_t()) != 0
                                           : (mpz_even_p(u.get_mpz_t()) != 0 && mpz_even_p(v.get_mpz_t()) != 0);
  if (!parity) return std::nullopt;
  return QuadInt::from_half(x.ring(), u, v);
}

inline bool is_unit(const QuadInt& a) { return a.is_unit(); }

/// Smallest unit > 1, by ascending search over v in u^2 - alpha*v^2 = -4 or 4.
inline QuadInt fundamental_unit(const RingSpec& ring) {
  const Int alpha = ring.alpha();
  const long step = ring.is_one_mod_four() ? 1 : 2;
  for (Int v = step;; v += step) {
    for (int sign : {-4, 4}) {
      auto u = exact_sqrt(alpha * v * v + sign);
      if (!u || *u == 0) continue;
      if (!ring.is_one_mod_four() && mpz_odd_p(u->get_mpz_t()) != 0) continue;
      if (ring.is_one_mod_four() && mpz_odd_p(Int(*u - v).get_mpz_t()) != 0) continue;
      return QuadInt::from_half(ring, *u, v);
    }
  }
}

/// Parses "a+b*w", "a-b*w", "a", "b*w", "w", "-w" or the pair form "(c1,c2)".
inline QuadInt parse_element(const RingSpec& ring, std::string_view text) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  }
  require(!s.empty(), ErrorKind::ParseError, "empty element");
  if (s.front() == '(') {
    require(s.back() == ')', ErrorKind::ParseError, "unterminated pair: " + s);
    auto comma = s.find(',');
    require(comma != std::string::npos, ErrorKind::ParseError, "pair needs a comma: " + s);
    return QuadInt::from_coords(ring, parse_int(s.substr(1, comma - 1)),
                               parse_int(s.substr(comma + 1, s.size() - comma - 2)));
  }
  Int c1 = 0, c2 = 0;
  bool seen_rational = false, seen_w = false;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t end = pos + 1;
    while (end < s.size() && s[end] != '+' && s[end] != '-') ++end;
    std::string term = s.substr(pos, end - pos);
    pos = end;
    std::string body = term;
    bool negative = false;
    if (!body.empty() && (body[0] == '+' || body[0] == '-')) {
      negative = body[0] == '-';
      body.erase(0, 1);
    }
    require(!body.empty(), ErrorKind::ParseError, "dangling sign in '" + s + "'");
    if (body.back() == 'w') {
      require(!seen_w, ErrorKind::ParseError, "repeated w term in '" + s + "'");
      seen_w = true;
      body.pop_back();
      if (!body.empty()) {
        require(body.back() == '*', ErrorKind::ParseError, "expected '*w' in '" + s + "'");
        body.pop_back();
      }
      Int coeff = body.empty() ? Int(1) : parse_int(body);
      c2 = negative ? Int(-coeff) : coeff;
    } else {
      require(!seen_rational, ErrorKind::ParseError, "repeated constant term in '" + s + "'");
      seen_rational = true;
      Int value = parse_int(body);
      c1 = negative ? Int(-value) : value;
    }
  }
  return QuadInt::from_coords(ring, c1, c2);
}

}  // namespace idem
