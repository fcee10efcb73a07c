#pragma once

// Certificates: target^{E1...Es} = A1 A2 ... Ar with every Ei in SL2 and every
// Ai idempotent. Counts are (r, s).

#include <optional>
#include <string>
#include <vector>

#include "idemfact/mat2.hpp"

namespace idem {

enum class Flag : unsigned { BudgetHit = 1, MrsExceeded = 2, RestripOccurred = 4 };

class Flags {
 public:
  Flags() = default;
  Flags(Flag f) : bits_(static_cast<unsigned>(f)) {}

  bool has(Flag f) const { return (bits_ & static_cast<unsigned>(f)) != 0; }
  bool empty() const { return bits_ == 0; }
  void set(Flag f) { bits_ |= static_cast<unsigned>(f); }
  Flags& operator|=(Flags o) {
    bits_ |= o.bits_;
    return *this;
  }
  friend Flags operator|(Flags a, Flags b) { return a |= b; }
  friend bool operator==(Flags, Flags) = default;

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    if (has(Flag::BudgetHit)) out.emplace_back("BudgetHit");
    if (has(Flag::MrsExceeded)) out.emplace_back("MrsExceeded");
    if (has(Flag::RestripOccurred)) out.emplace_back("RestripOccurred");
    return out;
  }
  /// '|'-joined names, empty when no flag is set.
  std::string to_string() const {
    std::string s;
    for (const auto& n : names()) s += (s.empty() ? "" : "|") + n;
    return s;
  }
  static Flag parse(const std::string& name) {
    if (name == "BudgetHit") return Flag::BudgetHit;
    if (name == "MrsExceeded") return Flag::MrsExceeded;
    if (name == "RestripOccurred") return Flag::RestripOccurred;
    fail(ErrorKind::ParseError, "unknown flag '" + name + "'");
  }

 private:
  unsigned bits_ = 0;
};

/// Unchecked certificate contents (e.g. freshly parsed).
struct CertificateData {
  Mat2 target;
  std::vector<SL2Element> conjugators;
  std::vector<Mat2> idempotents;
  std::vector<std::string> annotations;
  Flags flags;

  int r() const { return static_cast<int>(idempotents.size()); }
  int s() const { return static_cast<int>(conjugators.size()); }
};

struct VerifyReport {
  bool ok = true;
  std::string message;
  int failing_idempotent = -1;  ///< index into idempotents, if one is at fault
  int failing_conjugator = -1;

  explicit operator bool() const { return ok; }
};

/// Recomputes everything from the raw data.
inline VerifyReport verify_report(const CertificateData& c) {
  VerifyReport rep;
  auto bad = [&](std::string msg) {
    rep.ok = false;
    rep.message = std::move(msg);
    return rep;
  };
  const RingSpec& R = c.target.ring();
  if (c.idempotents.empty()) return bad("no idempotent factors (r must be >= 1)");
  for (std::size_t i = 0; i < c.conjugators.size(); ++i) {
    Mat2 m = to_matrix(c.conjugators[i]);
    if (!(m.ring() == R)) {
      rep.failing_conjugator = static_cast<int>(i);
      return bad("conjugator " + std::to_string(i) + " is over another ring");
    }
    if (!m.in_SL2()) {
      rep.failing_conjugator = static_cast<int>(i);
      return bad("conjugator " + std::to_string(i) + " " + to_string(c.conjugators[i]) + " is not in SL2");
    }
  }
  Mat2 prod = Mat2::identity(R);
  for (std::size_t i = 0; i < c.idempotents.size(); ++i) {
    const Mat2& a = c.idempotents[i];
    if (!(a.ring() == R) || !a.is_idempotent()) {
      rep.failing_idempotent = static_cast<int>(i);
      return bad("idempotent " + std::to_string(i) + " " + a.to_string() + " is not idempotent");
    }
    prod = prod * a;
  }
  Mat2 lhs = conjugate_seq(c.target, c.conjugators);
  if (!(lhs == prod)) return bad("conjugated target " + lhs.to_string() + " != product " + prod.to_string());
  return rep;
}

inline bool verify(const CertificateData& c) { return verify_report(c).ok; }

/// A CertificateData that has passed verification.
class Certificate {
 public:
  static Certificate assemble(CertificateData d) {
    VerifyReport rep = verify_report(d);
    require(rep.ok, ErrorKind::VerificationFailed, rep.message);
    return Certificate(std::move(d));
  }

  const CertificateData& data() const { return d_; }
  const Mat2& target() const { return d_.target; }
  const std::vector<SL2Element>& conjugators() const { return d_.conjugators; }
  const std::vector<Mat2>& idempotents() const { return d_.idempotents; }
  const std::vector<std::string>& annotations() const { return d_.annotations; }
  Flags flags() const { return d_.flags; }
  int r() const { return d_.r(); }
  int s() const { return d_.s(); }

  Certificate with_annotation(std::string note) const {
    CertificateData d = d_;
    d.annotations.push_back(std::move(note));
    return Certificate(std::move(d));
  }
  Certificate with_flags(Flags f) const {
    CertificateData d = d_;
    d.flags |= f;
    return Certificate(std::move(d));
  }

 private:
  explicit Certificate(CertificateData d) : d_(std::move(d)) {}
  CertificateData d_;
};

inline bool verify(const Certificate& c) { return verify(c.data()); }

inline Certificate cert_trivial(const Mat2& m) {
  require(m.is_idempotent(), ErrorKind::NotIdempotent, m.to_string() + " is not idempotent");
  return Certificate::assemble({m, {}, {m}, {}, {}});
}

/// c certifies N = M^{A1...Al}; returns a certificate for M.
inline Certificate cert_conjugate(const Certificate& c, const std::vector<SL2Element>& as) {
  for (const auto& a : as) checked_sl2(a);
  CertificateData d = c.data();
  d.target = unconjugate_seq(c.target(), as);
  d.conjugators.insert(d.conjugators.begin(), as.begin(), as.end());
  return Certificate::assemble(std::move(d));
}

namespace detail {

// Idempotents of `c` moved so that they certify c.target under `cs` instead:
// each Ai becomes Ai^{Es^{-1} ... E1^{-1} C1 ... Ck}.
inline std::vector<Mat2> transport(const Certificate& c, const std::vector<SL2Element>& cs) {
  std::vector<Mat2> out;
  for (const auto& a : c.idempotents()) out.push_back(conjugate_seq(unconjugate_seq(a, c.conjugators()), cs));
  return out;
}

}  // namespace detail

/// Certificate for cm.target * cn.target, keeping whichever conjugator list is shorter.
inline Certificate cert_multiply(const Certificate& cm, const Certificate& cn) {
  require(cm.target().ring() == cn.target().ring(), ErrorKind::RingMismatch, "cert_multiply across rings");
  CertificateData d{cm.target() * cn.target(), {}, {}, {}, cm.flags() | cn.flags()};
  if (cm.s() < cn.s()) {
    d.conjugators = cm.conjugators();
    d.idempotents = cm.idempotents();
    auto moved = detail::transport(cn, d.conjugators);
    d.idempotents.insert(d.idempotents.end(), moved.begin(), moved.end());
  } else {
    d.conjugators = cn.conjugators();
    d.idempotents = detail::transport(cm, d.conjugators);
    d.idempotents.insert(d.idempotents.end(), cn.idempotents().begin(), cn.idempotents().end());
  }
  d.annotations = cm.annotations();
  d.annotations.insert(d.annotations.end(), cn.annotations().begin(), cn.annotations().end());
  return Certificate::assemble(std::move(d));
}

/// Certificate for (E1 ... Ek) * c.target, same conjugators.
inline Certificate cert_left_mul_idempotents(const std::vector<Mat2>& es, const Certificate& c) {
  CertificateData d = c.data();
  Mat2 prefix = Mat2::identity(c.target().ring());
  std::vector<Mat2> moved;
  for (const auto& e : es) {
    require(e.is_idempotent(), ErrorKind::NotIdempotent, e.to_string() + " is not idempotent");
    prefix = prefix * e;
    moved.push_back(conjugate_seq(e, c.conjugators()));
  }
  d.target = prefix * c.target();
  d.idempotents.insert(d.idempotents.begin(), moved.begin(), moved.end());
  return Certificate::assemble(std::move(d));
}

/// target = prod_i Ai^{Es^{-1} ... E1^{-1}}.
inline Mat2 reconstruct_target(const CertificateData& c) {
  Mat2 m = Mat2::identity(c.target.ring());
  for (const auto& a : c.idempotents) m = m * unconjugate_seq(a, c.conjugators);
  return m;
}

}  // namespace idem
