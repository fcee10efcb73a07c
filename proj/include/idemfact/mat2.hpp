#pragma once

// 2x2 matrices over O_k and the four conjugation generators.
//
//   a11(a) = (a 1; -1 0)   a12(a) = (1 a; 0 1)
//   a21(a) = (1 0; a 1)    a22(a) = (0 1; -1 a)
//
// M^C means C^{-1} M C, and M^{C1 C2 ... Cn} = (...(M^{C1})^{C2}...)^{Cn}.

#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "idemfact/quadring.hpp"

namespace idem {

class Mat2 {
 public:
  Mat2(QuadInt p, QuadInt q, QuadInt r, QuadInt s)
      : p_(std::move(p)), q_(std::move(q)), r_(std::move(r)), s_(std::move(s)) {
    require(p_.ring() == q_.ring() && p_.ring() == r_.ring() && p_.ring() == s_.ring(), ErrorKind::RingMismatch,
            "matrix entries from different rings");
  }

  static Mat2 identity(const RingSpec& ring) { return {QuadInt(ring, 1), QuadInt(ring), QuadInt(ring), QuadInt(ring, 1)}; }
  static Mat2 zero(const RingSpec& ring) { return {QuadInt(ring), QuadInt(ring), QuadInt(ring), QuadInt(ring)}; }
  /// Integer entries, for literals in tests and fixed idempotents.
  static Mat2 of(const RingSpec& ring, long p, long q, long r, long s) {
    return {QuadInt(ring, p), QuadInt(ring, q), QuadInt(ring, r), QuadInt(ring, s)};
  }

  const QuadInt& p() const { return p_; }
  const QuadInt& q() const { return q_; }
  const QuadInt& r() const { return r_; }
  const QuadInt& s() const { return s_; }
  const RingSpec& ring() const { return p_.ring(); }

  QuadInt det() const { return p_ * s_ - q_ * r_; }
  QuadInt trace() const { return p_ + s_; }
  bool is_identity() const { return *this == identity(ring()); }
  bool in_SL2() const { return det() == QuadInt(ring(), 1); }
  bool is_idempotent() const { return *this * *this == *this; }
  bool is_row() const { return r_.is_zero() && s_.is_zero(); }

  /// (s -q; -r p). Equals the inverse when det = 1.
  Mat2 adjugate() const { return {s_, -q_, -r_, p_}; }

  friend Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.p_ * b.p_ + a.q_ * b.r_, a.p_ * b.q_ + a.q_ * b.s_, a.r_ * b.p_ + a.s_ * b.r_,
            a.r_ * b.q_ + a.s_ * b.s_};
  }
  friend Mat2 operator*(const QuadInt& k, const Mat2& m) { return {k * m.p_, k * m.q_, k * m.r_, k * m.s_}; }

  friend bool operator==(const Mat2&, const Mat2&) = default;

  /// "(p q; r s)" with entries in w-syntax.
  std::string to_string() const {
    return "(" + p_.to_string() + " " + q_.to_string() + "; " + r_.to_string() + " " + s_.to_string() + ")";
  }

 private:
  QuadInt p_, q_, r_, s_;
};

inline Mat2 row_matrix(const QuadInt& x, const QuadInt& y) { return {x, y, QuadInt(x.ring()), QuadInt(x.ring())}; }

inline bool is_idempotent(const Mat2& m) { return m.is_idempotent(); }

enum class ConjKind { A11, A12, A21, A22 };

inline std::string_view to_string(ConjKind k) {
  switch (k) {
    case ConjKind::A11: return "a11";
    case ConjKind::A12: return "a12";
    case ConjKind::A21: return "a21";
    case ConjKind::A22: return "a22";
  }
  return "?";
}

inline ConjKind parse_conj_kind(std::string_view s) {
  if (s == "a11") return ConjKind::A11;
  if (s == "a12") return ConjKind::A12;
  if (s == "a21") return ConjKind::A21;
  if (s == "a22") return ConjKind::A22;
  fail(ErrorKind::ParseError, "unknown conjugator kind '" + std::string(s) + "'");
}

struct Conjugator {
  ConjKind kind;
  QuadInt a;

  Mat2 matrix() const {
    const RingSpec& R = a.ring();
    QuadInt one(R, 1), zero(R);
    switch (kind) {
      case ConjKind::A11: return {a, one, -one, zero};
      case ConjKind::A12: return {one, a, zero, one};
      case ConjKind::A21: return {one, zero, a, one};
      case ConjKind::A22: return {zero, one, -one, a};
    }
    fail(ErrorKind::PreconditionViolated, "bad conjugator kind");
  }

  std::string to_string() const { return std::string(idem::to_string(kind)) + "(" + a.to_string() + ")"; }

  friend bool operator==(const Conjugator&, const Conjugator&) = default;
};

inline Conjugator a11(const QuadInt& a) { return {ConjKind::A11, a}; }
inline Conjugator a12(const QuadInt& a) { return {ConjKind::A12, a}; }
inline Conjugator a21(const QuadInt& a) { return {ConjKind::A21, a}; }
inline Conjugator a22(const QuadInt& a) { return {ConjKind::A22, a}; }

/// Either a symbolic generator or an arbitrary SL2 matrix.
using SL2Element = std::variant<Conjugator, Mat2>;

inline Mat2 to_matrix(const SL2Element& e) {
  if (const auto* c = std::get_if<Conjugator>(&e)) return c->matrix();
  return std::get<Mat2>(e);
}

inline std::string to_string(const SL2Element& e) {
  if (const auto* c = std::get_if<Conjugator>(&e)) return c->to_string();
  return std::get<Mat2>(e).to_string();
}

inline Mat2 checked_sl2(const SL2Element& e) {
  Mat2 c = to_matrix(e);
  require(c.in_SL2(), ErrorKind::NotInSL2, "conjugator " + to_string(e) + " has det " + c.det().to_string());
  return c;
}

/// C^{-1} M C.
inline Mat2 conjugate(const Mat2& m, const SL2Element& e) {
  Mat2 c = checked_sl2(e);
  return c.adjugate() * m * c;
}

/// M^{C1 C2 ... Cn}.
inline Mat2 conjugate_seq(Mat2 m, std::span<const SL2Element> cs) {
  for (const auto& c : cs) m = conjugate(m, c);
  return m;
}

/// Inverse of conjugate_seq: returns N with N^{C1...Cn} = m.
inline Mat2 unconjugate_seq(Mat2 m, std::span<const SL2Element> cs) {
  for (auto it = cs.rbegin(); it != cs.rend(); ++it) {
    Mat2 c = checked_sl2(*it);
    m = c * m * c.adjugate();
  }
  return m;
}

/// G = (0 0; 1 1): idempotent, and G [a b] = (0 0; 1 0)[a b] for any row.
inline Mat2 swap_idempotent(const RingSpec& ring) { return Mat2::of(ring, 0, 0, 1, 1); }

/// (1 -1; 0 0) and (1 0; 1-z 0); their product is diag(z, 0).
inline std::pair<Mat2, Mat2> scalar_pair(const QuadInt& z) {
  const RingSpec& R = z.ring();
  QuadInt one(R, 1), zero(R);
  return {Mat2(one, -one, zero, zero), Mat2(one, zero, one - z, zero)};
}

struct SwapIdentity {
  Mat2 prefactor;  ///< (0 0; 1 0)
  Mat2 row;        ///< [-y x]
};

/// [x y]^{a22(0)} = (0 0; 1 0) [-y x], checked.
inline SwapIdentity swap_identity(const QuadInt& x, const QuadInt& y) {
  const RingSpec& R = x.ring();
  SwapIdentity out{Mat2::of(R, 0, 0, 1, 0), row_matrix(-y, x)};
  require(conjugate(row_matrix(x, y), a22(QuadInt(R))) == out.prefactor * out.row,
          ErrorKind::PipelineInvariantViolated, "swap identity failed");
  return out;
}

}  // namespace idem
