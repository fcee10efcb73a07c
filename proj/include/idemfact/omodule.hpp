#pragma once

// Ideals of O_k as rank-2 sublattices of the coordinate lattice Z^2
// (basis {1, w}). A (fractional) ideal is (1/d) L with L spanned by the HNF
// columns (a, 0) and (b, c), a, c > 0, 0 <= b < a.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "idemfact/intlib.hpp"
#include "idemfact/quadring.hpp"

namespace idem {

namespace detail {

struct LatVec {
  Int x, y;
  std::vector<Int> coef;  // combination of the input vectors, when tracked

  void sub_mul(const LatVec& o, const Int& k) {
    x -= k * o.x;
    y -= k * o.y;
    for (std::size_t i = 0; i < coef.size(); ++i) coef[i] -= k * o.coef[i];
  }
  void negate() {
    x = -x;
    y = -y;
    for (auto& c : coef) c = -c;
  }
};

// Euclid across vectors on one coordinate until at most one is nonzero there;
// returns its index (or -1).
template <class Get>
inline int reduce_on(std::vector<LatVec>& vs, std::vector<int> idx, Get get, std::vector<int>& rest) {
  for (;;) {
    int piv = -1;
    for (int i : idx) {
      if (get(vs[i]) != 0 && (piv < 0 || abs_int(get(vs[i])) < abs_int(get(vs[piv])))) piv = i;
    }
    if (piv < 0) {
      rest = idx;
      return -1;
    }
    bool others = false;
    for (int i : idx) {
      if (i == piv || get(vs[i]) == 0) continue;
      vs[i].sub_mul(vs[piv], floor_div(get(vs[i]), get(vs[piv])));
      if (get(vs[i]) != 0) others = true;
    }
    if (!others) {
      rest.clear();
      for (int i : idx) {
        if (i != piv) rest.push_back(i);
      }
      return piv;
    }
  }
}

struct Hnf {
  LatVec a;   // (a, 0)
  LatVec bc;  // (b, c)
};

inline std::optional<Hnf> hnf(std::vector<LatVec> vs) {
  std::vector<int> all(vs.size()), rest;
  for (std::size_t i = 0; i < vs.size(); ++i) all[i] = static_cast<int>(i);
  int pb = reduce_on(vs, all, [](const LatVec& v) -> const Int& { return v.y; }, rest);
  if (pb < 0) return std::nullopt;
  std::vector<int> rest2;
  int pa = reduce_on(vs, rest, [](const LatVec& v) -> const Int& { return v.x; }, rest2);
  if (pa < 0) return std::nullopt;
  Hnf h{vs[pa], vs[pb]};
  if (h.a.x < 0) h.a.negate();
  if (h.bc.y < 0) h.bc.negate();
  h.bc.sub_mul(h.a, floor_div(h.bc.x, h.a.x));
  return h;
}

inline LatVec vec_of(const QuadInt& g, std::size_t ncoef = 0, std::size_t which = 0) {
  Coords p = g.coords();
  LatVec v{p.c1, p.c2, std::vector<Int>(ncoef, Int(0))};
  if (ncoef) v.coef[which] = 1;
  return v;
}

}  // namespace detail

class OIdeal {
 public:
  /// (1/d) * lattice generated by {g, g*w} over the given numerators.
  static OIdeal from_generators(const RingSpec& ring, const std::vector<QuadInt>& gens, const Int& denominator = 1) {
    require(denominator >= 1, ErrorKind::PreconditionViolated, "denominator must be positive");
    std::vector<detail::LatVec> vs;
    QuadInt w = omega(ring);
    bool any = false;
    for (const auto& g : gens) {
      require(g.ring() == ring, ErrorKind::RingMismatch, "generator from another ring");
      if (g.is_zero()) continue;
      any = true;
      vs.push_back(detail::vec_of(g));
      vs.push_back(detail::vec_of(g * w));
    }
    require(any, ErrorKind::AllGeneratorsZero, "ideal needs a nonzero generator");
    auto h = detail::hnf(vs);
    require(h.has_value(), ErrorKind::PipelineInvariantViolated, "ideal lattice is not of rank 2");
    OIdeal I(ring, h->a.x, h->bc.x, h->bc.y, denominator, gens);
    I.check_module();
    return I;
  }

  const RingSpec& ring() const { return ring_; }
  const Int& a() const { return a_; }
  const Int& b() const { return b_; }
  const Int& c() const { return c_; }
  const Int& denominator() const { return d_; }
  const std::vector<QuadInt>& generators() const { return gens_; }
  bool is_integral() const { return d_ == 1; }

  /// Z-basis of the numerator lattice, as elements.
  QuadInt basis_first() const { return QuadInt::from_coords(ring_, a_, 0); }
  QuadInt basis_second() const { return QuadInt::from_coords(ring_, b_, c_); }

  /// Index numerator a*c and denominator d^2 of the norm.
  Int norm_numerator() const { return a_ * c_; }
  Int norm_denominator() const { return d_ * d_; }
  /// Norm of an integral ideal.
  Int norm() const {
    require(divides(norm_denominator(), norm_numerator()), ErrorKind::PreconditionViolated,
            "norm of a fractional ideal is not an integer");
    return norm_numerator() / norm_denominator();
  }

  bool contains(const QuadInt& x) const {
    require(x.ring() == ring_, ErrorKind::RingMismatch, "membership across rings");
    Coords p = x.coords();
    Int X = d_ * p.c1, Y = d_ * p.c2;
    if (!divides(c_, Y)) return false;
    Int j = Y / c_;
    return divides(a_, X - j * b_);
  }

  friend bool operator==(const OIdeal& I, const OIdeal& J) {
    return I.ring_ == J.ring_ && I.a_ == J.a_ && I.b_ == J.b_ && I.c_ == J.c_ && I.d_ == J.d_;
  }

  std::string to_string() const {
    std::string s = "<" + a_.get_str() + ", " + QuadInt::from_coords(ring_, b_, c_).to_string() + ">";
    return d_ == 1 ? s : "(1/" + d_.get_str() + ")" + s;
  }

 private:
  OIdeal(const RingSpec& ring, Int a, Int b, Int c, Int d, std::vector<QuadInt> gens)
      : ring_(ring), a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)), gens_(std::move(gens)) {
    Int g = gcd(gcd(a_, b_), gcd(c_, d_));
    if (g > 1) {
      a_ /= g;
      b_ /= g;
      c_ /= g;
      d_ /= g;
    }
  }

  bool numerator_contains(const QuadInt& x) const {
    Coords p = x.coords();
    if (!divides(c_, p.c2)) return false;
    return divides(a_, p.c1 - (p.c2 / c_) * b_);
  }

  void check_module() const {
    QuadInt w = omega(ring_);
    require(numerator_contains(basis_first() * w) && numerator_contains(basis_second() * w),
            ErrorKind::PipelineInvariantViolated, "lattice not closed under multiplication by w");
  }

  RingSpec ring_;
  Int a_, b_, c_, d_;
  std::vector<QuadInt> gens_;
};

inline OIdeal ideal_from_generators(const RingSpec& ring, const std::vector<QuadInt>& gens) {
  return OIdeal::from_generators(ring, gens);
}

inline OIdeal unit_ideal(const RingSpec& ring) { return OIdeal::from_generators(ring, {QuadInt(ring, 1)}); }

inline Int ideal_norm(const OIdeal& I) { return I.norm(); }

inline bool contains(const OIdeal& I, const QuadInt& x) { return I.contains(x); }

inline OIdeal ideal_product(const OIdeal& I, const OIdeal& J) {
  require(I.ring() == J.ring(), ErrorKind::RingMismatch, "ideal product across rings");
  std::vector<QuadInt> gens;
  for (const auto& x : {I.basis_first(), I.basis_second()}) {
    for (const auto& y : {J.basis_first(), J.basis_second()}) gens.push_back(x * y);
  }
  return OIdeal::from_generators(I.ring(), gens, I.denominator() * J.denominator());
}

/// Coefficients c_i with sum c_i * gens_i == target.
inline std::vector<QuadInt> solve_combination(const std::vector<QuadInt>& gens, const QuadInt& target) {
  require(!gens.empty(), ErrorKind::AllGeneratorsZero, "no generators");
  const RingSpec& R = target.ring();
  QuadInt w = omega(R);
  const std::size_t n = 2 * gens.size();
  std::vector<detail::LatVec> vs;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    require(gens[i].ring() == R, ErrorKind::RingMismatch, "generator from another ring");
    vs.push_back(detail::vec_of(gens[i], n, 2 * i));
    vs.push_back(detail::vec_of(gens[i] * w, n, 2 * i + 1));
  }
  std::vector<QuadInt> coeffs(gens.size(), QuadInt(R));
  if (target.is_zero()) return coeffs;
  auto h = detail::hnf(vs);
  require(h.has_value(), ErrorKind::NotInIdeal, "generators span no ideal");
  Coords t = target.coords();
  auto not_in = [&] { fail(ErrorKind::NotInIdeal, target.to_string() + " is not in the ideal"); };
  if (!divides(h->bc.y, t.c2)) not_in();
  Int j = t.c2 / h->bc.y;
  Int rem = t.c1 - j * h->bc.x;
  if (!divides(h->a.x, rem)) not_in();
  Int i = rem / h->a.x;
  for (std::size_t g = 0; g < gens.size(); ++g) {
    Int k0 = i * h->a.coef[2 * g] + j * h->bc.coef[2 * g];
    Int k1 = i * h->a.coef[2 * g + 1] + j * h->bc.coef[2 * g + 1];
    coeffs[g] = QuadInt::from_coords(R, k0, k1);
  }
  QuadInt sum(R);
  for (std::size_t g = 0; g < gens.size(); ++g) sum += coeffs[g] * gens[g];
  require(sum == target, ErrorKind::PipelineInvariantViolated, "combination does not reproduce the target");
  return coeffs;
}

/// conj(I) / N(I); checks I * I^{-1} = O.
inline OIdeal inverse_ideal(const OIdeal& I) {
  require(I.is_integral(), ErrorKind::PreconditionViolated, "inverse_ideal expects an integral ideal");
  std::vector<QuadInt> gens{I.basis_first().conj(), I.basis_second().conj()};
  OIdeal inv = OIdeal::from_generators(I.ring(), gens, I.norm());
  require(ideal_product(I, inv) == unit_ideal(I.ring()), ErrorKind::PipelineInvariantViolated,
          "I * I^{-1} != O for " + I.to_string());
  return inv;
}

struct ElementSearch {
  std::optional<QuadInt> found;
  bool complete = true;  ///< false when the box was capped by the height budget
};

/// Bound on |v| (half-coordinate) for some associate of any element of norm +-n.
inline Int associate_box(const RingSpec& ring, const Int& n) {
  QuadInt eps = fundamental_unit(ring);
  double e0 = (eps.half_u().get_d() + eps.half_v().get_d() * std::sqrt(double(ring.alpha()))) / 2.0;
  double bound = std::sqrt(n.get_d()) * (e0 + 1.0) / std::sqrt(double(ring.alpha()));
  return Int(std::ceil(bound)) + 1;
}

/// Elements of norm +-n (one per sign class, v >= 0) inside the associate box;
/// stops at the first one accepted by `pred`.
template <class Pred>
inline ElementSearch search_norm(const RingSpec& ring, const Int& n, const Int& height_budget, Pred pred) {
  ElementSearch out;
  Int vmax = associate_box(ring, n);
  if (vmax > height_budget) {
    vmax = height_budget;
    out.complete = false;
  }
  const Int alpha = ring.alpha();
  for (Int v = 0; v <= vmax; ++v) {
    for (int sign : {1, -1}) {
      auto u = exact_sqrt(alpha * v * v + sign * 4 * n);
      if (!u) continue;
      for (const Int& uu : {*u, Int(-*u)}) {
        bool parity = ring.is_one_mod_four() ? mpz_even_p(Int(uu - v).get_mpz_t()) != 0
                                             : (mpz_even_p(uu.get_mpz_t()) != 0 && mpz_even_p(v.get_mpz_t()) != 0);
        if (!parity) continue;
        QuadInt z = QuadInt::from_half(ring, uu, v);
        if (pred(z)) {
          out.found = z;
          return out;
        }
        if (*u == 0) break;
      }
    }
  }
  return out;
}

/// Generator search with the completeness flag.
inline ElementSearch principal_search(const OIdeal& I, const Int& height_budget) {
  require(I.is_integral(), ErrorKind::PreconditionViolated, "principality test expects an integral ideal");
  const RingSpec& R = I.ring();
  Int n = I.norm();
  if (n == 1) return {QuadInt(R, 1), true};
  ElementSearch s = search_norm(R, n, height_budget, [&](const QuadInt& z) { return I.contains(z); });
  if (s.found) {
    require(abs_int(s.found->norm()) == n && OIdeal::from_generators(R, {*s.found}) == I,
            ErrorKind::PipelineInvariantViolated, "principal generator failed re-verification");
  }
  return s;
}

inline std::optional<QuadInt> is_principal(const OIdeal& I, const Int& height_budget) {
  return principal_search(I, height_budget).found;
}

/// A non-unit z dividing x and y, of the largest norm found; norms are drawn
/// from the divisors of N(xO + yO).
inline ElementSearch common_divisor_search(const QuadInt& x, const QuadInt& y, const Int& height_budget) {
  require(!(x.is_zero() && y.is_zero()), ErrorKind::PreconditionViolated, "common_divisor of (0, 0)");
  const RingSpec& R = x.ring();
  OIdeal I = OIdeal::from_generators(R, {x, y});
  ElementSearch out;
  auto divs = positive_divisors(I.norm());
  for (auto it = divs.rbegin(); it != divs.rend(); ++it) {
    if (*it == 1) break;
    ElementSearch s = search_norm(R, *it, height_budget, [&](const QuadInt& z) {
      return try_exact_div(x, z).has_value() && try_exact_div(y, z).has_value();
    });
    if (!s.complete) out.complete = false;
    if (s.found) {
      out.found = s.found;
      return out;
    }
  }
  return out;
}

inline std::optional<QuadInt> common_divisor(const QuadInt& x, const QuadInt& y, const Int& height_budget) {
  return common_divisor_search(x, y, height_budget).found;
}

}  // namespace idem
