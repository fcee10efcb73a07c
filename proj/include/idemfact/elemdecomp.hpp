#pragma once

// SL2(O_k) -> product of elementary matrices, and the alternating normal form
// upper(q0) lower(q1) ... upper(q_{2n-2}) lower(q_{2n-1}).

#include <algorithm>
#include <map>
#include <tuple>
#include <vector>

#include "idemfact/mat2.hpp"

namespace idem {

enum class Side { Upper, Lower };

struct ElementaryFactor {
  Side side;
  QuadInt a;

  Mat2 matrix() const {
    const RingSpec& R = a.ring();
    QuadInt one(R, 1), zero(R);
    return side == Side::Upper ? Mat2(one, a, zero, one) : Mat2(one, zero, a, one);
  }
  friend bool operator==(const ElementaryFactor&, const ElementaryFactor&) = default;
};

inline ElementaryFactor upper(const QuadInt& a) { return {Side::Upper, a}; }
inline ElementaryFactor lower(const QuadInt& a) { return {Side::Lower, a}; }

inline Mat2 product(const RingSpec& ring, const std::vector<ElementaryFactor>& fs) {
  Mat2 m = Mat2::identity(ring);
  for (const auto& f : fs) m = m * f.matrix();
  return m;
}

struct AlternatingWord {
  std::vector<QuadInt> qs;  ///< even length; even index = upper, odd index = lower
  int n0 = 0;

  Mat2 product(const RingSpec& ring) const {
    Mat2 m = Mat2::identity(ring);
    for (std::size_t i = 0; i < qs.size(); ++i) m = m * (i % 2 == 0 ? upper(qs[i]) : lower(qs[i])).matrix();
    return m;
  }
};

struct DecomposeOptions {
  int max_steps = 400;
  int fallback_depth = 4;
  int fallback_radius = 2;
  int beam_width = 24;
  int fallback_escalations = 2;  ///< retries, each deeper and wider
};

struct Decomposition {
  std::vector<ElementaryFactor> factors;
  bool fallback_used = false;
};

namespace detail {

// Nearest-lattice quotient window around num/den (num, den in O_k, den != 0).
inline QuadInt rounded_ratio(const QuadInt& num, const QuadInt& den) {
  QuadInt t = num * den.conj();
  Int n = den.norm();
  Coords p = t.coords();
  return QuadInt::from_coords(num.ring(), round_half_toward_zero(p.c1, n), round_half_toward_zero(p.c2, n));
}

// Best remainder x - q*y with q near x/y; returns q with |N(x - q y)| minimal.
inline QuadInt best_quotient(const QuadInt& x, const QuadInt& y) {
  const RingSpec& R = x.ring();
  QuadInt q0 = rounded_ratio(x, y);
  Coords c = q0.coords();
  std::optional<QuadInt> best;
  Int best_norm;
  int best_l1 = 0;
  for (int i = -6; i <= 6; ++i) {
    for (int j = -2; j <= 2; ++j) {
      QuadInt q = QuadInt::from_coords(R, c.c1 + i, c.c2 + j);
      Int n = abs_int((x - q * y).norm());
      int l1 = std::abs(i) + std::abs(j);
      if (!best || n < best_norm || (n == best_norm && l1 < best_l1)) {
        best = q;
        best_norm = n;
        best_l1 = l1;
      }
    }
  }
  return *best;
}

struct ColState {
  QuadInt x, y;
  std::vector<ElementaryFactor> moves;
};

inline Int col_potential(const QuadInt& x, const QuadInt& y) {
  Int nx = abs_int(x.norm()), ny = abs_int(y.norm());
  if (x.is_zero()) return ny;
  if (y.is_zero()) return nx;
  return nx < ny ? nx : ny;
}

// (smaller norm, larger norm) of a column; lexicographic descent measure.
inline std::pair<Int, Int> col_key(const QuadInt& x, const QuadInt& y) {
  Int nx = abs_int(x.norm()), ny = abs_int(y.norm());
  Int lo = col_potential(x, y);
  return {lo, nx < ny ? ny : nx};
}

// Beam search over short move sequences with perturbed quotients. Returns the
// best state reached whose smaller norm drops below the current one.
inline std::optional<ColState> fallback_search(const QuadInt& x, const QuadInt& y, const DecomposeOptions& opt) {
  const RingSpec& R = x.ring();
  const Int start = col_potential(x, y);
  std::vector<ColState> frontier{ColState{x, y, {}}};
  std::optional<ColState> best;
  std::pair<Int, Int> best_key;
  for (int depth = 0; depth < opt.fallback_depth; ++depth) {
    std::vector<std::pair<std::pair<Int, Int>, ColState>> next;
    for (const auto& st : frontier) {
      for (Side side : {Side::Upper, Side::Lower}) {
        const QuadInt& num = side == Side::Upper ? st.x : st.y;
        const QuadInt& den = side == Side::Upper ? st.y : st.x;
        if (den.is_zero()) continue;
        Coords c = rounded_ratio(num, den).coords();
        for (int i = -opt.fallback_radius; i <= opt.fallback_radius; ++i) {
          for (int j = -opt.fallback_radius; j <= opt.fallback_radius; ++j) {
            QuadInt q = QuadInt::from_coords(R, c.c1 + i, c.c2 + j);
            if (q.is_zero()) continue;
            ColState nx = st;
            if (side == Side::Upper) {
              nx.x = st.x - q * st.y;
              nx.moves.push_back(upper(q));
            } else {
              nx.y = st.y - q * st.x;
              nx.moves.push_back(lower(q));
            }
            if (nx.x.is_unit() || nx.y.is_unit()) return nx;
            auto key = col_key(nx.x, nx.y);
            if (key.first < start && (!best || key < best_key)) {
              best = nx;
              best_key = key;
            }
            next.emplace_back(std::move(key), std::move(nx));
          }
        }
      }
    }
    // A halving of the smaller norm is good enough to stop early.
    if (best && best_key.first * 2 <= start) return best;
    std::sort(next.begin(), next.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    if (next.size() > static_cast<std::size_t>(opt.beam_width)) next.erase(next.begin() + opt.beam_width, next.end());
    frontier.clear();
    for (auto& [k, st] : next) frontier.push_back(std::move(st));
  }
  return best;
}

}  // namespace detail

/// M = factors[0] * factors[1] * ... ; verified.
inline Decomposition decompose(const Mat2& M, const DecomposeOptions& opt = {}) {
  const RingSpec& R = M.ring();
  require(M.in_SL2(), ErrorKind::NotInSL2, "decompose: det = " + M.det().to_string());
  Decomposition out;
  QuadInt one(R, 1), zero(R);
  // Work on the first column; each recorded factor F satisfies cur = F * next.
  Mat2 cur = M;
  auto apply = [&](const ElementaryFactor& f) {
    QuadInt neg = -f.a;
    Mat2 inv = (f.side == Side::Upper ? upper(neg) : lower(neg)).matrix();
    cur = inv * cur;
    out.factors.push_back(f);
  };
  for (int step = 0;; ++step) {
    require(step < opt.max_steps, ErrorKind::BudgetExhausted, "decompose: step budget exhausted");
    const QuadInt& x = cur.p();
    const QuadInt& y = cur.r();
    if (x == one && y.is_zero()) break;
    if (x == one) {
      apply(lower(y));
    } else if (y.is_unit()) {
      apply(upper(exact_div(x - one, y)));
    } else if (x.is_unit()) {
      apply(lower(exact_div(y - one, x)));
    } else {
      // Neither entry is zero here: a zero entry forces the other to be a unit.
      bool reduce_x = abs_int(x.norm()) >= abs_int(y.norm());
      const QuadInt& big = reduce_x ? x : y;
      const QuadInt& small = reduce_x ? y : x;
      QuadInt q = detail::best_quotient(big, small);
      if (abs_int((big - q * small).norm()) < abs_int(small.norm())) {
        apply(reduce_x ? upper(q) : lower(q));
      } else {
        // widen the search before giving up
        std::optional<detail::ColState> found;
        DecomposeOptions wide = opt;
        for (int round = 0; round <= opt.fallback_escalations && !found; ++round) {
          found = detail::fallback_search(x, y, wide);
          wide.fallback_depth += 2;
          wide.beam_width *= 4;
        }
        require(found.has_value(), ErrorKind::BudgetExhausted, "decompose: fallback search found no descent");
        out.fallback_used = true;
        for (const auto& f : found->moves) apply(f);
      }
    }
  }
  if (!cur.q().is_zero()) out.factors.push_back(upper(cur.q()));
  require(product(R, out.factors) == M, ErrorKind::PipelineInvariantViolated, "decompose: product mismatch");
  return out;
}

/// Merge, drop identities, pad to the alternating even-length shape.
inline AlternatingWord to_alternating(const std::vector<ElementaryFactor>& factors, const Mat2& M) {
  const RingSpec& R = M.ring();
  std::vector<ElementaryFactor> fs;
  for (const auto& f : factors) {
    if (f.a.is_zero()) continue;
    if (!fs.empty() && fs.back().side == f.side) {
      fs.back().a += f.a;
      if (fs.back().a.is_zero()) fs.pop_back();
    } else {
      fs.push_back(f);
    }
  }
  AlternatingWord w;
  if (!fs.empty() && fs.front().side == Side::Lower) w.qs.push_back(QuadInt(R));
  for (const auto& f : fs) w.qs.push_back(f.a);
  if (w.qs.size() % 2 == 1) w.qs.push_back(QuadInt(R));
  w.n0 = static_cast<int>(w.qs.size() / 2);
  require(w.product(R) == M, ErrorKind::PipelineInvariantViolated, "to_alternating changed the product");
  return w;
}

}  // namespace idem
