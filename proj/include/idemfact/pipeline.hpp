#pragma once

// The constructive pipeline: Euclidean-chain certificates for unimodular rows,
// integerization of [x y] to [h beta] with h rational, and the driver that
// factors any row [x y] into idempotents.

#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "idemfact/certify.hpp"
#include "idemfact/elemdecomp.hpp"
#include "idemfact/intlib.hpp"
#include "idemfact/omodule.hpp"

namespace idem {

inline constexpr int kMrsBound = 9;
inline constexpr int kBoundR = 15;
inline constexpr int kBoundS = 19;

struct Budgets {
  Int f_max = 1000000;       ///< Dirichlet scan length, doubled on retry
  int dirichlet_retries = 3;
  DecomposeOptions decompose;
  Int height_budget = 20000;  ///< cap on the |v| box of norm searches
  long e_scan_limit = 20000;
  int coset_radius = 40;
  int max_restrips = 3;

  /// Every budget multiplied by k (k >= 1 grows, k < 1 shrinks).
  static Budgets scaled(double k) {
    Budgets b;
    if (k <= 0) k = 1;
    auto mul = [k](double v) { return v * k < 1 ? 1.0 : v * k; };
    b.f_max = Int(mul(b.f_max.get_d()));
    b.decompose.max_steps = static_cast<int>(mul(b.decompose.max_steps));
    b.height_budget = Int(mul(b.height_budget.get_d()));
    b.e_scan_limit = static_cast<long>(mul(static_cast<double>(b.e_scan_limit)));
    b.coset_radius = static_cast<int>(mul(b.coset_radius));
    return b;
  }

  /// Defaults, scaled by IDEMFACT_BUDGET when it is set to a positive number.
  static Budgets from_env() {
    const char* v = std::getenv("IDEMFACT_BUDGET");
    if (!v || !*v) return Budgets{};
    char* end = nullptr;
    double k = std::strtod(v, &end);
    if (end == v || k <= 0) return Budgets{};
    return scaled(k);
  }
};

// ---------------------------------------------------------------------------
// Euclidean chain

struct EuclidChain {
  AlternatingWord qs;
  std::vector<QuadInt> rs;  ///< rs[i + 1] = r_i, i = -1 .. 2n0
  int n0 = 0;

  const QuadInt& r(int i) const { return rs.at(static_cast<std::size_t>(i + 1)); }
};

/// r_{-1} = x, r_0 = y, r_{i+2} = r_i - q_{i+1} r_{i+1}; checks r_{2n0} = 0.
inline EuclidChain build_chain(const QuadInt& x, const QuadInt& y, const AlternatingWord& w) {
  EuclidChain ch{w, {x, y}, w.n0};
  for (std::size_t k = 0; k < w.qs.size(); ++k) {
    const QuadInt& ri = ch.rs[k];
    const QuadInt& ri1 = ch.rs[k + 1];
    ch.rs.push_back(ri - w.qs[k] * ri1);
  }
  for (int i = -1; i <= 2 * ch.n0 - 2; ++i) {
    require(ch.r(i) == w.qs[i + 1] * ch.r(i + 1) + ch.r(i + 2), ErrorKind::ChainBroken, "chain recurrence fails");
  }
  require(ch.r(2 * ch.n0).is_zero(), ErrorKind::ChainBroken,
          "r_{2n0} = " + ch.r(2 * ch.n0).to_string() + " is not zero");
  return ch;
}

/// Per-run bookkeeping shared by the pipeline stages.
struct Trace {
  std::vector<int> n0s;
  std::vector<std::string> phases;
  bool fallback_used = false;
  Flags flags;

  int n0_max() const {
    int m = 0;
    for (int n : n0s) m = std::max(m, n);
    return m;
  }
};

struct UnimodularCert {
  Certificate cert;
  EuclidChain chain;
  bool fallback_used = false;
};

inline UnimodularCert unimodular_row_cert_detailed(const QuadInt& x, const QuadInt& y, const QuadInt& z,
                                                   const QuadInt& w, const Budgets& budgets = {}) {
  const RingSpec& R = x.ring();
  require(x * w - y * z == QuadInt(R, 1), ErrorKind::NotUnimodular,
          "x*w - y*z != 1 for (" + x.to_string() + ", " + y.to_string() + ")");
  Mat2 M(x, z, y, w);
  Decomposition dec = decompose(M, budgets.decompose);
  AlternatingWord word = to_alternating(dec.factors, M);
  EuclidChain ch = build_chain(x, y, word);
  const int n0 = ch.n0;

  std::vector<SL2Element> conj;
  for (int k = 0; k < 2 * n0; ++k) {
    QuadInt neg = -word.qs[static_cast<std::size_t>(k)];
    conj.emplace_back(k % 2 == 0 ? a21(neg) : a12(neg));
  }
  QuadInt one(R, 1), zero(R);
  std::vector<Mat2> idem;
  for (int h = 0; h < n0; ++h) {
    Mat2 e(one, zero, word.qs[static_cast<std::size_t>(2 * h)], zero);
    std::vector<SL2Element> tail(conj.begin() + 2 * h + 1, conj.end());
    idem.push_back(conjugate_seq(e, tail));
  }
  auto [e1, e2] = scalar_pair(ch.r(2 * n0 - 1));
  idem.push_back(e1);
  idem.push_back(e2);

  Flags flags;
  if (n0 > kMrsBound) flags.set(Flag::MrsExceeded);
  Certificate c = Certificate::assemble(
      {row_matrix(x, y), std::move(conj), std::move(idem), {"euclid-chain n0=" + std::to_string(n0)}, flags});
  require(c.r() == n0 + 2 && c.s() == 2 * n0, ErrorKind::PipelineInvariantViolated, "chain certificate counts");
  return {c, ch, dec.fallback_used};
}

inline Certificate unimodular_row_cert(const QuadInt& x, const QuadInt& y, const QuadInt& z, const QuadInt& w,
                                       const Budgets& budgets = {}, Trace* trace = nullptr) {
  UnimodularCert u = unimodular_row_cert_detailed(x, y, z, w, budgets);
  if (trace) {
    trace->n0s.push_back(u.chain.n0);
    trace->fallback_used = trace->fallback_used || u.fallback_used;
    trace->flags |= u.cert.flags();
  }
  return u.cert;
}

/// [a 0] = (1 -1; 0 0)(1 0; 1-a 0); a single idempotent when a is 0 or 1.
inline Certificate row_with_zero_cert(const QuadInt& a) {
  const RingSpec& R = a.ring();
  if (a.is_zero() || a == QuadInt(R, 1)) return cert_trivial(row_matrix(a, QuadInt(R))).with_annotation("row-with-zero");
  auto [e1, e2] = scalar_pair(a);
  return Certificate::assemble({row_matrix(a, QuadInt(R)), {}, {e1, e2}, {"row-with-zero"}, {}});
}

/// (x 0; sign 0) through one a11 conjugation onto a unimodular row.
inline Certificate column_unit_cert(const QuadInt& x, int sign, const Budgets& budgets = {},
                                    Trace* trace = nullptr) {
  require(sign == 1 || sign == -1, ErrorKind::PreconditionViolated, "sign must be +1 or -1");
  const RingSpec& R = x.ring();
  QuadInt one(R, 1), zero(R);
  QuadInt s(R, sign);
  // (x 0; s 0)^{a11(-s x)} = [x, -s], and x*0 - (-s)*s = 1
  Certificate row = unimodular_row_cert(x, -s, s, zero, budgets, trace);
  Certificate c = cert_conjugate(row, {a11(-(s * x))});
  require(c.target() == Mat2(x, zero, sign == 1 ? one : -one, zero), ErrorKind::PipelineInvariantViolated,
          "column certificate target");
  return c.with_annotation("column-unit");
}

// ---------------------------------------------------------------------------
// Integerization

/// rows[k]^{conjugators} = (prod prefactors) * scalar * rows[k+1].
struct Step {
  std::string label;
  std::vector<SL2Element> conjugators;
  std::vector<Mat2> prefactors;
  QuadInt scalar;
};

struct Case1Plan {
  Int a0, b0, a, b;
  QuadInt t;  ///< the a12 shift, b + a*w in (c1, c2) coordinates
};

struct Case3Context {
  Int lambda, epsilon;
  Int z1, z2, w1, w2;
  Int disc;                     ///< z1*w2 - z2*w1
  std::vector<Int> disc_primes;  ///< primes dividing disc
  bool lambda_branch = true;
  std::vector<Int> J, X, Y;
  std::vector<Congruence> residues;  ///< one per prime of J (a_l on X, b_l on Y)
  Int u = 1, P = 1;
  bool dirichlet_used = false;
  Int A, B;  ///< progression searched (before any sign flip)
  Int f = 0, p = 0;
  Int e;
  Int y1p, y2p;
};

struct IntegerizeResult {
  Int h;
  QuadInt beta;
  std::string path;
  std::optional<Case1Plan> plan;
  std::optional<Case3Context> case3;
  std::vector<Step> steps;
  std::vector<Mat2> rows;              ///< rows[0] = [x y]; rows[k+1] after steps[k]
  std::optional<Certificate> terminal;  ///< certifies rows.back() directly
};

namespace detail {

inline Int smallest_residue_avoiding(const Int& ell, const std::vector<Int>& bad) {
  for (Int r = 0; r < ell; ++r) {
    bool ok = true;
    for (const auto& b : bad) {
      if (mod_floor(b, ell) == r) ok = false;
    }
    if (ok) return r;
  }
  fail(ErrorKind::PipelineInvariantViolated, "no admissible residue mod " + ell.get_str());
}

// -z^{-1} w mod ell
inline Int neg_ratio(const Int& z, const Int& w, const Int& ell) {
  return mod_floor(-w * mod_inverse(mod_floor(z, ell), ell), ell);
}

}  // namespace detail

/// The shift e of the coprime-making step in Case 3A (z1 w2 != z2 w1).
inline Case3Context case3a_context(const QuadInt& x, const QuadInt& y, const Budgets& budgets = {}) {
  Coords xp = x.coords(), yp = y.coords();
  Case3Context c;
  c.lambda = gcd(xp.c1, yp.c1);
  c.epsilon = gcd(xp.c2, yp.c2);
  require(c.lambda > 0 && c.epsilon > 0, ErrorKind::PreconditionViolated, "case 3A needs nonzero gcds");
  require(gcd(c.lambda, c.epsilon) == 1, ErrorKind::PipelineInvariantViolated, "gcd(lambda, epsilon) != 1");
  c.z1 = xp.c1 / c.lambda;
  c.w1 = yp.c1 / c.lambda;
  c.z2 = xp.c2 / c.epsilon;
  c.w2 = yp.c2 / c.epsilon;
  c.disc = c.z1 * c.w2 - c.z2 * c.w1;
  require(c.disc != 0, ErrorKind::PreconditionViolated, "proportional coordinates");
  c.disc_primes = prime_divisors(c.disc);

  const bool lam_odd = mpz_odd_p(c.lambda.get_mpz_t()) != 0;
  const bool eps_odd = mpz_odd_p(c.epsilon.get_mpz_t()) != 0;
  // With z1 = 0 the lambda progression is constant; use epsilon when allowed.
  c.lambda_branch = lam_odd && !(c.z1 == 0 && eps_odd);

  const Int& base = c.lambda_branch ? c.lambda : c.epsilon;
  const Int& zs = c.lambda_branch ? c.z2 : c.z1;  // J: primes of base not dividing zs
  const Int& zo = c.lambda_branch ? c.z1 : c.z2;  // X: primes of J dividing zo
  for (const Int& ell : prime_divisors(base)) {
    if (divides(ell, zs)) continue;
    c.J.push_back(ell);
    std::vector<Int> bad;
    if (divides(ell, zo)) {
      c.X.push_back(ell);
      bad.push_back(c.lambda_branch ? detail::neg_ratio(c.z2, c.w2, ell) : detail::neg_ratio(c.z1, c.w1, ell));
    } else {
      c.Y.push_back(ell);
      bad.push_back(detail::neg_ratio(c.z1, c.w1, ell));
      bad.push_back(detail::neg_ratio(c.z2, c.w2, ell));
    }
    c.residues.emplace_back(detail::smallest_residue_avoiding(ell, bad), ell);
  }
  if (!c.J.empty()) {
    Congruence sol = crt(c.residues);
    c.u = sol.residue();
    c.P = sol.modulus();
  }

  const Int& z = c.lambda_branch ? c.z1 : c.z2;
  const Int& w = c.lambda_branch ? c.w1 : c.w2;
  c.A = z * c.P;
  c.B = z * c.u + w;
  if (c.A == 0) {
    c.f = 0;
  } else {
    c.dirichlet_used = true;
    const Int& other = c.lambda_branch ? c.epsilon : c.lambda;
    Int step = abs_int(c.A);
    Int f_max = budgets.f_max;
    for (int attempt = 0;; ++attempt) {
      try {
        DirichletHit hit = dirichlet_prime_search(step, c.B, c.disc_primes, other, f_max);
        c.f = c.A > 0 ? hit.f : Int(-hit.f);
        c.p = hit.p;
        break;
      } catch (const Error& err) {
        if (err.kind() != ErrorKind::BudgetExhausted || attempt >= budgets.dirichlet_retries) throw;
        f_max *= 2;
      }
    }
    require(c.p == z * (c.P * c.f + c.u) + w, ErrorKind::PipelineInvariantViolated, "Dirichlet prime mismatch");
  }
  c.e = c.P * c.f + c.u;
  Coords yn = (y + c.e * x).coords();
  c.y1p = yn.c1;
  c.y2p = yn.c2;
  require(gcd(c.y1p, c.y2p) == 1, ErrorKind::PipelineInvariantViolated,
          "case 3A: gcd(y1', y2') = " + gcd(c.y1p, c.y2p).get_str());
  return c;
}

namespace detail {

class Integerizer {
 public:
  Integerizer(const Budgets& b, Trace* t) : budgets_(b), trace_(t) {}

  IntegerizeResult run(const QuadInt& x, const QuadInt& y) {
    res_.emplace(IntegerizeResult{0, QuadInt(x.ring()), {}, {}, {}, {}, {row_matrix(x, y)}, {}});
    dispatch(x, y);
    verify_replay();
    return std::move(*res_);
  }

 private:
  void push(Step s, const QuadInt& nx, const QuadInt& ny) {
    res_->path += (res_->path.empty() ? "" : ">") + s.label;
    res_->steps.push_back(std::move(s));
    res_->rows.push_back(row_matrix(nx, ny));
  }

  void done(const QuadInt& x, const QuadInt& y, const std::string& label) {
    res_->path += (res_->path.empty() ? "" : ">") + label;
    res_->h = x.rational_value();
    res_->beta = y;
    require(res_->rows.back() == row_matrix(x, y), ErrorKind::PipelineInvariantViolated, "integerize: final row");
  }

  Step swap_step(const RingSpec& R, const std::string& label) {
    return {label, {a22(QuadInt(R))}, {swap_idempotent(R)}, QuadInt(R, 1)};
  }

  void dispatch(const QuadInt& x, const QuadInt& y) {
    const RingSpec& R = x.ring();
    Coords xp = x.coords(), yp = y.coords();
    if (xp.c2 == 0) return done(x, y, "a");
    if (yp.c2 == 0) {
      push(swap_step(R, "b"), -y, x);
      return done(-y, x, "done");
    }
    if (xp.c1 == 0 && yp.c1 == 0) {
      QuadInt w = omega(R);
      QuadInt nx(R, xp.c2), ny(R, yp.c2);
      push({"c", {}, {}, w}, nx, ny);
      return done(nx, ny, "done");
    }
    if (gcd(xp.c1, xp.c2) == 1) return case1(x, y);
    if (gcd(yp.c1, yp.c2) == 1) {
      push(swap_step(R, "2"), -y, x);
      return case1(-y, x);
    }
    Int s = gcd(xp.c1, xp.c2), r = gcd(yp.c1, yp.c2), delta = gcd(s, r);
    if (delta > 1) {
      QuadInt nx = exact_div(x, QuadInt(R, delta)), ny = exact_div(y, QuadInt(R, delta));
      push({"3B", {}, {}, QuadInt(R, delta)}, nx, ny);
      return dispatch(nx, ny);
    }
    Int lambda = gcd(xp.c1, yp.c1), eps = gcd(xp.c2, yp.c2);
    Int z1 = xp.c1 / lambda, w1 = yp.c1 / lambda, z2 = xp.c2 / eps, w2 = yp.c2 / eps;
    if (z1 * w2 - z2 * w1 == 0) return proportional(x, y, lambda, eps, z1, z2, w2);

    Case3Context ctx = case3a_context(x, y, budgets_);
    QuadInt ny = y + ctx.e * x;
    push({"3A", {a12(QuadInt(R, ctx.e))}, {}, QuadInt(R, 1)}, x, ny);
    res_->case3 = ctx;
    push(swap_step(R, "2"), -ny, x);
    case1(-ny, x);
  }

  void case1(const QuadInt& x, const QuadInt& y) {
    const RingSpec& R = x.ring();
    Coords xp = x.coords(), yp = y.coords();
    const bool one = R.is_one_mod_four();
    // a0 * first + b0 * x2 = 1
    Int first = one ? Int(xp.c1 + xp.c2) : xp.c1;
    BezoutResult bz = ext_gcd(first, xp.c2);
    require(bz.g == 1, ErrorKind::PipelineInvariantViolated, "case 1 needs gcd(x1, x2) = 1");
    Int a0 = bz.u, b0 = bz.v;
    if (first != 0) {
      // normalize b0 to [0, |first|) and recompute a0
      Int k = floor_div(b0, abs_int(first));
      b0 -= k * abs_int(first);
      a0 = exact_quotient(1 - b0 * xp.c2, first);
    }
    Case1Plan plan{a0, b0, -a0 * yp.c2, -b0 * yp.c2, QuadInt(R)};
    plan.t = QuadInt::from_coords(R, plan.b, plan.a);
    QuadInt shifted = y + plan.t * x;
    Int closed = one ? Int(plan.b * xp.c1 + plan.a * xp.c2 * R.omega_shift() + yp.c1)
                     : Int(plan.b * xp.c1 + plan.a * xp.c2 * R.alpha() + yp.c1);
    require(shifted == QuadInt(R, closed), ErrorKind::PipelineInvariantViolated,
            "case 1: shifted coordinate " + shifted.to_string() + " differs from closed form " + closed.get_str());
    QuadInt h(R, -closed);
    push({"1", {a12(plan.t), a22(QuadInt(R))}, {swap_idempotent(R)}, QuadInt(R, 1)}, h, x);
    res_->plan = plan;
    done(h, x, "done");
  }

  // [x y] = [g 0] [z2 w2] with g = lambda*d + eps*w, d = z1/z2 = +-1.
  void proportional(const QuadInt& x, const QuadInt& y, const Int& lambda, const Int& eps, const Int& z1,
                    const Int& z2, const Int& w2) {
    const RingSpec& R = x.ring();
    Int d = z1 / z2;
    require(d == 1 || d == -1, ErrorKind::PipelineInvariantViolated, "proportional case: z1 != +-z2");
    QuadInt g = QuadInt::from_coords(R, lambda * d, eps);
    require(g * QuadInt(R, z2) == x && g * QuadInt(R, w2) == y, ErrorKind::PipelineInvariantViolated,
            "proportional case: factorization");
    BezoutResult bz = ext_gcd(z2, w2);
    require(bz.g == 1, ErrorKind::PipelineInvariantViolated, "proportional case: gcd(z2, w2) != 1");
    Certificate unimod =
        unimodular_row_cert(QuadInt(R, z2), QuadInt(R, w2), QuadInt(R, -bz.v), QuadInt(R, bz.u), budgets_, trace_);
    Certificate c = cert_multiply(row_with_zero_cert(g), unimod);
    require(c.target() == row_matrix(x, y), ErrorKind::PipelineInvariantViolated, "proportional case: target");
    res_->terminal = c.with_annotation("integerize:3A-proportional");
    res_->path += (res_->path.empty() ? "" : ">") + std::string("3A=");
  }

  void verify_replay() const {
    for (std::size_t k = 0; k < res_->steps.size(); ++k) {
      const Step& s = res_->steps[k];
      Mat2 lhs = conjugate_seq(res_->rows[k], s.conjugators);
      Mat2 rhs = s.scalar * res_->rows[k + 1];
      for (auto it = s.prefactors.rbegin(); it != s.prefactors.rend(); ++it) rhs = *it * rhs;
      require(lhs == rhs, ErrorKind::PipelineInvariantViolated, "integerize replay fails at step " + s.label);
    }
  }

  const Budgets& budgets_;
  Trace* trace_;
  std::optional<IntegerizeResult> res_;
};

}  // namespace detail

inline IntegerizeResult integerize(const QuadInt& x, const QuadInt& y, const Budgets& budgets = {},
                                   Trace* trace = nullptr) {
  return detail::Integerizer(budgets, trace).run(x, y);
}

// ---------------------------------------------------------------------------
// Rows with a rational first entry

struct SplitResult {
  Mat2 E;
  QuadInt xp, yp;
  QuadInt cof_a, cof_b;  ///< cof_a * xp + cof_b * yp = 1
};

/// Checks every claim of a split: E idempotent with trace 1 and det 0,
/// [xp yp] E = [x y] and (xp, yp) unimodular. Returns a reason on failure.
inline std::optional<std::string> check_split(const QuadInt& x, const QuadInt& y, const Mat2& E, const QuadInt& xp,
                                              const QuadInt& yp) {
  const RingSpec& R = x.ring();
  if (!E.is_idempotent()) return "E is not idempotent";
  if (E.trace() != QuadInt(R, 1)) return "trace(E) != 1";
  if (!E.det().is_zero()) return "det(E) != 0";
  if (!(row_matrix(xp, yp) * E == row_matrix(x, y))) return "[x' y'] E != [x y]";
  if (OIdeal::from_generators(R, {xp, yp}).norm() != 1) return "(x', y') is not unimodular";
  return std::nullopt;
}

/// [x y] = [x' y'] E with E idempotent and (x', y') unimodular, using
/// s, t in I^{-1} with x s + y t = 1 and a search over x' + g t, y' - g s, g in I.
inline SplitResult cz_case1_split_unchecked(const QuadInt& x, const QuadInt& y, const Budgets& budgets = {}) {
  const RingSpec& R = x.ring();
  OIdeal I = OIdeal::from_generators(R, {x, y});
  OIdeal inv = inverse_ideal(I);
  const Int& d = inv.denominator();
  QuadInt j1 = inv.basis_first(), j2 = inv.basis_second();
  auto c = solve_combination({x * j1, x * j2, y * j1, y * j2}, QuadInt(R, d));
  QuadInt sn = c[0] * j1 + c[1] * j2;  // d * s
  QuadInt tn = c[2] * j1 + c[3] * j2;  // d * t
  QuadInt D(R, d);
  Mat2 E(exact_div(x * sn, D), exact_div(y * sn, D), exact_div(x * tn, D), exact_div(y * tn, D));
  require(E.is_idempotent() && E.trace() == QuadInt(R, 1), ErrorKind::PipelineInvariantViolated,
          "split: E is not an idempotent of trace 1");
  QuadInt g1 = I.basis_first(), g2 = I.basis_second();
  for (int rad = 0; rad <= budgets.coset_radius; ++rad) {
    for (int i = -rad; i <= rad; ++i) {
      for (int j = -rad; j <= rad; ++j) {
        if (std::max(std::abs(i), std::abs(j)) != rad) continue;
        QuadInt gamma = Int(i) * g1 + Int(j) * g2;
        QuadInt xp = x + exact_div(gamma * tn, D);
        QuadInt yp = y - exact_div(gamma * sn, D);
        if (xp.is_zero() && yp.is_zero()) continue;
        if (OIdeal::from_generators(R, {xp, yp}).norm() != 1) continue;
        auto cof = solve_combination({xp, yp}, QuadInt(R, 1));
        SplitResult out{E, xp, yp, cof[0], cof[1]};
        auto why = check_split(x, y, E, xp, yp);
        require(!why, ErrorKind::PipelineInvariantViolated, "split: " + why.value_or(""));
        return out;
      }
    }
  }
  fail(ErrorKind::NoUnimodularSolutionInBudget,
       "no unimodular (x', y') within coset radius " + std::to_string(budgets.coset_radius));
}

/// Requires m = gcd(x, N(y)) != 1 and gcd(x, N(y)/m) = 1.
inline SplitResult cz_case1_split(const QuadInt& x, const QuadInt& y, const Budgets& budgets = {}) {
  require(x.is_rational(), ErrorKind::PreconditionViolated, "split expects a rational x");
  Int xi = x.rational_value();
  Int ny = y.norm();
  Int m = gcd(xi, ny);
  require(m != 1 && m != 0, ErrorKind::PreconditionViolated, "split needs gcd(x, N(y)) != 1, got " + m.get_str());
  require(gcd(xi, ny / m) == 1, ErrorKind::PreconditionViolated, "split needs gcd(x, N(y)/m) = 1");
  return cz_case1_split_unchecked(x, y, budgets);
}

/// Smallest e >= 0 with gcd(x, N(y + e x)/m) = 1.
inline Int cz_case2_shift(const Int& x, const QuadInt& y, const Int& m, const Budgets& budgets = {}) {
  require(m != 1 && m == gcd(x, y.norm()), ErrorKind::PreconditionViolated, "shift needs m = gcd(x, N(y)) != 1");
  Int ny = y.norm(), tr = y.trace();
  for (long e = 0; e <= budgets.e_scan_limit; ++e) {
    Int ne = ny + Int(e) * x * tr + Int(e) * Int(e) * x * x;
    if (gcd(x, exact_quotient(ne, m)) != 1) continue;
    require(ne == (y + Int(e) * QuadInt(y.ring(), x)).norm(), ErrorKind::PipelineInvariantViolated,
            "norm expansion mismatch");
    require(gcd(x, ne) == m, ErrorKind::PipelineInvariantViolated, "shift: gcd(x, N(y+ex)) != m");
    return Int(e);
  }
  fail(ErrorKind::BudgetExhausted, "no shift e <= " + std::to_string(budgets.e_scan_limit));
}

/// Two idempotent prefactors on the chain certificate of (x/z, y/z).
inline Certificate principal_row_cert(const QuadInt& x, const QuadInt& y, const QuadInt& z,
                                         const Budgets& budgets = {}, Trace* trace = nullptr) {
  require(!z.is_zero(), ErrorKind::NotPrincipalWitness, "z = 0");
  auto x1 = try_exact_div(x, z), y1 = try_exact_div(y, z);
  require(x1 && y1, ErrorKind::NotPrincipalWitness, z.to_string() + " does not divide both entries");
  std::vector<QuadInt> cof;
  try {
    cof = solve_combination({*x1, *y1}, QuadInt(x.ring(), 1));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotInIdeal) throw;
    fail(ErrorKind::NotPrincipalWitness, "(x/z, y/z) is not unimodular");
  }
  Certificate c = unimodular_row_cert(*x1, *y1, -cof[1], cof[0], budgets, trace);
  auto [e1, e2] = scalar_pair(z);
  return cert_left_mul_idempotents({e1, e2}, c).with_annotation("principal-ideal");
}

// ---------------------------------------------------------------------------
// Driver

struct CoreContext {
  Int m;
  Int norm_lambda;  ///< N(y)/m
  Int x0;           ///< x/m
  Int s;
  Int e = 0;
  std::vector<QuadInt> strips;
  std::string branch;
};

struct FactorOptions {
  Budgets budgets;
  Trace* partial = nullptr;  ///< receives the trace so far when the driver throws
};

struct FactorResult {
  Certificate cert;
  Trace trace;
  std::optional<IntegerizeResult> integerized;
  std::optional<CoreContext> core_ctx;

  bool conforming() const { return cert.r() <= kBoundR && cert.s() <= kBoundS && cert.flags().empty(); }
};

namespace detail {

// row = scalar * cert.target
struct Reduced {
  Certificate cert;
  QuadInt scalar;
};

class Driver {
 public:
  Driver(const Budgets& b, FactorResult* out) : b_(b), out_(out) {}

  Reduced row(const QuadInt& x, const QuadInt& y, int depth) {
    const RingSpec& R = x.ring();
    QuadInt one(R, 1);
    if (x.is_zero() && y.is_zero()) return {cert_trivial(Mat2::zero(R)).with_annotation("zero-row"), one};
    if (y.is_zero()) return {row_with_zero_cert(x), one};
    if (x.is_zero()) {
      Certificate inner = cert_multiply(cert_trivial(swap_idempotent(R)), row_with_zero_cert(-y));
      return {cert_conjugate(inner, {a22(QuadInt(R))}).with_annotation("swap"), one};
    }
    if (x.is_rational()) return core(x, y, depth);
    IntegerizeResult ir = integerize(x, y, b_, &out_->trace);
    phase("integerize:" + ir.path);
    Reduced base = ir.terminal ? Reduced{*ir.terminal, one} : core(QuadInt(R, ir.h), ir.beta, depth);
    for (std::size_t k = ir.steps.size(); k-- > 0;) {
      const Step& s = ir.steps[k];
      Certificate c = base.cert;
      for (auto it = s.prefactors.rbegin(); it != s.prefactors.rend(); ++it) c = cert_multiply(cert_trivial(*it), c);
      base = {cert_conjugate(c, s.conjugators), s.scalar * base.scalar};
      require(base.scalar * base.cert.target() == ir.rows[k], ErrorKind::PipelineInvariantViolated,
              "replay of integerize step " + s.label);
    }
    if (!out_->integerized) out_->integerized = std::move(ir);
    return base;
  }

 private:
  void phase(std::string p) { out_->trace.phases.push_back(std::move(p)); }

  Reduced scaled(Reduced r, const QuadInt& z) {
    r.scalar = z * r.scalar;
    return r;
  }

  // x rational, y arbitrary
  Reduced core(const QuadInt& x, const QuadInt& y, int depth) {
    const RingSpec& R = x.ring();
    QuadInt one(R, 1);
    if (x.is_zero() || y.is_zero()) return row(x, y, depth);
    Coords yp = y.coords();
    Int content = gcd(gcd(x.rational_value(), yp.c1), yp.c2);
    if (content > 1) {
      QuadInt g(R, content);
      phase("strip:content " + content.get_str());
      return scaled(core(exact_div(x, g), exact_div(y, g), depth), g);
    }
    OIdeal I = OIdeal::from_generators(R, {x, y});
    if (I.norm() == 1) {
      phase("unimodular");
      auto cof = solve_combination({x, y}, one);
      return {unimodular_row_cert(x, y, -cof[1], cof[0], b_, &out_->trace), one};
    }
    ElementSearch ps = principal_search(I, b_.height_budget);
    if (!ps.complete) out_->trace.flags.set(Flag::BudgetHit);
    if (ps.found) {
      const QuadInt& z = *ps.found;
      phase("principal " + z.to_pair_string());
      QuadInt x1 = exact_div(x, z), y1 = exact_div(y, z);
      auto cof = solve_combination({x1, y1}, one);
      return {unimodular_row_cert(x1, y1, -cof[1], cof[0], b_, &out_->trace), z};
    }
    ElementSearch cd = common_divisor_search(x, y, b_.height_budget);
    if (!cd.complete) out_->trace.flags.set(Flag::BudgetHit);
    if (cd.found) {
      const QuadInt& z = *cd.found;
      phase("strip " + z.to_pair_string());
      QuadInt x1 = exact_div(x, z), y1 = exact_div(y, z);
      if (x1.is_rational()) return scaled(core(x1, y1, depth), z);
      require(depth < b_.max_restrips, ErrorKind::BudgetExhausted, "restrip limit reached");
      out_->trace.flags.set(Flag::RestripOccurred);
      phase("restrip");
      return scaled(row(x1, y1, depth + 1), z);
    }
    return reduce_common(x.rational_value(), y);
  }

  Reduced reduce_common(const Int& x, const QuadInt& y) {
    const RingSpec& R = y.ring();
    CoreContext t;
    t.m = gcd(x, y.norm());
    require(t.m != 1, ErrorKind::PipelineInvariantViolated, "common branch with m = 1");
    t.norm_lambda = y.norm() / t.m;
    t.x0 = x / t.m;
    t.s = gcd(x, t.norm_lambda);
    QuadInt X(R, x), Y = y;
    if (t.s != 1) {
      t.e = cz_case2_shift(x, y, t.m, b_);
      Y = y + t.e * X;
      t.branch = "shift";
    } else {
      t.branch = "split";
    }
    phase("common m=" + t.m.get_str() + " s=" + t.s.get_str() + " e=" + t.e.get_str());
    SplitResult sp = cz_case1_split_unchecked(X, Y, b_);
    Certificate u = unimodular_row_cert(sp.xp, sp.yp, -sp.cof_b, sp.cof_a, b_, &out_->trace);
    Certificate c = cert_multiply(u, cert_trivial(sp.E)).with_annotation("split");
    if (t.e != 0) c = cert_conjugate(c, {a12(QuadInt(R, t.e))}).with_annotation("shift e=" + t.e.get_str());
    out_->core_ctx = t;
    return {c, QuadInt(R, 1)};
  }

  const Budgets& b_;
  FactorResult* out_;
};

}  // namespace detail

inline FactorResult factor_singular_row(const QuadInt& x, const QuadInt& y, const FactorOptions& opt = {}) {
  require(x.ring() == y.ring(), ErrorKind::RingMismatch, "row entries from different rings");
  const RingSpec& R = x.ring();
  FactorResult out{cert_trivial(Mat2::zero(R)), {}, {}, {}};
  detail::Driver drv(opt.budgets, &out);
  std::optional<detail::Reduced> attempt;
  try {
    attempt.emplace(drv.row(x, y, 0));
  } catch (const Error&) {
    if (opt.partial) *opt.partial = out.trace;
    throw;
  }
  detail::Reduced& red = *attempt;
  Certificate c = red.cert;
  if (!(red.scalar == QuadInt(R, 1))) {
    auto [e1, e2] = scalar_pair(red.scalar);
    c = cert_left_mul_idempotents({e1, e2}, c).with_annotation("scalar " + red.scalar.to_pair_string());
  }
  c = c.with_flags(out.trace.flags);
  require(c.target() == row_matrix(x, y), ErrorKind::PipelineInvariantViolated, "driver: target mismatch");
  require(verify(c), ErrorKind::VerificationFailed, "driver: final certificate does not verify");
  bool ok = c.r() <= kBoundR && c.s() <= kBoundS && c.flags().empty();
  c = c.with_annotation("counts r=" + std::to_string(c.r()) + " s=" + std::to_string(c.s()) + " vs (15,19): " +
                        (ok ? "conforming" : "non-conforming"));
  out.cert = c;
  return out;
}

}  // namespace idem
