#pragma once

// The grid-crossing strategy for continuous paths: bet that the path keeps
// following the prediction made at time a, one dyadic level at a time.

#include <memory>
#include <numeric>
#include <optional>
#include <string>

#include "gtp/strategy.hpp"
#include "gtp/wellorder.hpp"

namespace gtp {

/// The prediction, or nothing when no member agrees with the prefix.
inline std::optional<Path> try_predict(const WellOrderedFamily& family, const Path& w, const Rat& t, PredictMode mode) {
  try {
    return predict(family, w, t, mode).path;
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

/// inf{t in [s, b] : w(t) on the 2^-n grid and w(t) != avoid}, or b.
inline Rat grid_hit(const Path& w, const Rat& s, const Rat& b, long n, const std::optional<Rat>& avoid) {
  if (w.has_gadgets()) throw std::invalid_argument("grid hitting times need a gadget-free path");
  const Rat step = pow2(-n);
  auto on_grid = [&](const Rat& x) { return denominator(x * pow2(n)) == 1 && (!avoid || x != *avoid); };
  if (s >= b) return b;
  auto pcs = w.pieces(s, b);
  for (std::size_t i = 0; i < pcs.size(); ++i) {
    const Piece& pc = pcs[i];
    Rat end = i + 1 < pcs.size() ? pcs[i + 1].start : b;
    if (on_grid(pc.value)) return pc.start;
    if (pc.slope == 0) continue;
    // next grid level in the direction of travel
    Rat scaled = pc.value * pow2(n);
    Rat g = pc.slope > 0 ? Rat(1 - ceil_div(-scaled)) * step : Rat(ceil_div(scaled) - 1) * step;
    if (avoid && g == *avoid) g += pc.slope > 0 ? step : -step;
    Rat t = pc.start + (g - pc.value) / pc.slope;
    bool last = i + 1 == pcs.size();
    if (t < end || (last && t == end)) return t;
  }
  return b;
}

struct Thm1Memo {
  std::optional<Path> pred;
  Rat Tw, Ta;  // current T_k for the realized path and for the prediction
};

/// Component n with initial capital 1: stopping times T_k(w) ^ T_k(w^a) and
/// bets 2^{2n} (w^a(T_{k+1}(w^a)) - w(tau_k)) while w still follows w^a.
inline SimpleStrategy thm1_component(const WellOrderedFamily& family, const Rat& a, const Rat& b, long n) {
  if (!(0 < a && a < b && b < 1)) throw std::invalid_argument("thm1 needs 0 < a < b < 1");
  if (n < 1) throw std::invalid_argument("thm1 component index must be >= 1");
  SimpleStrategy s;
  s.name = "thm1-n" + std::to_string(n);
  s.claimed_grade = Grade::plain;
  s.bet_bound = pow2(n);
  s.next = [family, a, b, n](const Path& w, const EventState& st) {
    Decision d;
    d.determined_at = st.tau;
    if (st.k == 1) {
      auto m = std::make_shared<Thm1Memo>();
      m->pred = try_predict(family, w, a, PredictMode::closed);
      if (!m->pred) return d;  // nothing predicted: never bet
      m->Tw = grid_hit(w, a, b, n, std::nullopt);
      m->Ta = grid_hit(*m->pred, a, b, n, std::nullopt);
      d.next_time = rmin(m->Tw, m->Ta);
      d.memo = std::shared_ptr<const Thm1Memo>(m);
      return d;
    }
    auto prev = std::any_cast<std::shared_ptr<const Thm1Memo>>(st.memo);
    const Path& pa = *prev->pred;
    // While w agrees with w^a up to tau, every earlier member still
    // disagrees, so the prediction at tau is still w^a.
    if (st.tau >= b || !prefix_equal(w, pa, st.tau, true)) return d;
    auto m = std::make_shared<Thm1Memo>(*prev);
    m->Tw = grid_hit(w, prev->Tw, b, n, w(prev->Tw));
    m->Ta = grid_hit(pa, prev->Ta, b, n, pa(prev->Ta));
    d.bet = pow2(2 * n) * (pa(m->Ta) - w(st.tau));
    d.next_time = rmin(m->Tw, m->Ta);
    d.memo = std::shared_ptr<const Thm1Memo>(m);
    return d;
  };
  return s;
}

/// Closed form of component n at b on the identity path: one unit per
/// completed grid crossing of [a, b], plus the partial last step.
inline Rat thm1_identity_capital(const Rat& a, const Rat& b, long n) {
  Rat scale = pow2(n);
  Int first = ceil_div(a * scale);
  Int last = ceil_div(b * scale);
  if (Rat(last) != b * scale) last -= 1;  // floor(b 2^n)
  if (first > last) return 1;
  Rat crossings = Rat(last - first);
  Rat rest = b - Rat(last) / scale;
  return 1 + crossings + scale * scale * rest * rest;
}

/// Sum over n <= n_max of n^-2 times component n, each started at 1. The
/// tail budget 1/n_max bounds the untruncated sum over n > n_max.
inline Mixture build_thm1_strategy(const WellOrderedFamily& family, const Rat& a, const Rat& b, long n_max) {
  Mixture m;
  m.name = "thm1";
  for (long n = 1; n <= n_max; ++n) {
    Rat w(1, n * n);
    m.components.push_back({scaled(thm1_component(family, a, b, n), w), w, n});
  }
  m.tail_budget = Rat(1, n_max);
  return m;
}

/// Index of the pair (a, b) in a fixed enumeration of rational pairs; the
/// outer mixture weight is proportional to 2^-(index+1).
inline long thm1_pair_index(const Rat& a, const Rat& b) {
  if (!(0 < a && a < b && b < 1)) throw std::invalid_argument("pair must satisfy 0 < a < b < 1");
  // rationals of (0,1) by denominator, then numerator, each value once
  auto rank = [](const Rat& x) {
    long q = static_cast<long>(denominator(x).convert_to<long>());
    long idx = 0;
    for (long d = 2; d < q; ++d)
      for (long p = 1; p < d; ++p)
        if (std::gcd(p, d) == 1) ++idx;
    long p0 = static_cast<long>(numerator(x).convert_to<long>());
    for (long p = 1; p < p0; ++p)
      if (std::gcd(p, q) == 1) ++idx;
    return idx;
  };
  long i = rank(a), j = rank(b);
  // Cantor diagonal over ordered index pairs
  long s = i + j;
  return s * (s + 1) / 2 + j;
}

inline Rat thm1_pair_weight(const Rat& a, const Rat& b) { return pow2(-(thm1_pair_index(a, b) + 1)); }

}  // namespace gtp
