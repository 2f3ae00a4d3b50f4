#pragma once

// Exact variation of a path or of its logarithm over a closed interval.
//
// Finite stretches are summed move by move (affine runs are monotone, so a
// run contributes its net change). Gadgets contribute a certificate: a
// divergent family makes every variation infinite; a convergent family is
// cut at some pair J and the remaining tail is bounded from above.

#include <gtp/logsum.hpp>
#include <gtp/paths.hpp>

#include <set>
#include <string>
#include <vector>

namespace gtp {

enum class VarKind { finite, convergent, infinite };

/// A variation value. For `convergent`, the true value lies in
/// [value, value + tail]; for `infinite`, `certificate` names the reason.
template <class V>
struct VarValue {
  VarKind kind = VarKind::finite;
  V value{};
  V tail{};
  std::string certificate;

  bool is_infinite() const { return kind == VarKind::infinite; }
  bool is_finite() const { return kind != VarKind::infinite; }
  bool is_exact() const { return kind == VarKind::finite; }

  static VarValue infinite(std::string why) {
    VarValue v;
    v.kind = VarKind::infinite;
    v.certificate = std::move(why);
    return v;
  }
};

enum class View { raw, log };

namespace detail {

struct Move {
  Rat from;
  Rat to;
};

struct TailRegion {
  Gadget gadget;
  long cut;  // pairs j >= cut lie in the region
  Rat base_from;
  Rat base_to;
};

struct Walk {
  std::vector<Move> moves;
  std::vector<TailRegion> tails;
  std::vector<Gadget> divergent;
};

inline void finite_moves(const Path& p, const Rat& l, const Rat& r, std::vector<Move>& out) {
  if (!(l < r)) return;
  auto ps = p.pieces(l, r);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const Rat& s = ps[i].start;
    if (i > 0) {
      Rat before = ps[i - 1].at(s);
      if (before != ps[i].value) out.push_back({before, ps[i].value});
    }
    Rat end = i + 1 < ps.size() ? ps[i + 1].start : r;
    Rat v_end = ps[i].at(end);
    if (v_end != ps[i].value) out.push_back({ps[i].value, v_end});
  }
  Rat lim = ps.back().at(r), v = p(r);
  if (lim != v) out.push_back({lim, v});
}

inline bool base_breakpoint_in(const Path& p, const Rat& lo, const Rat& hi, bool lo_closed, bool hi_closed) {
  for (const auto& s : p.segments()) {
    bool after = lo_closed ? s.start >= lo : s.start > lo;
    bool before = hi_closed ? s.start <= hi : s.start < hi;
    if (after && before) return true;
  }
  return false;
}

inline Walk walk(const Path& p, const Rat& a, const Rat& b, long min_cut) {
  if (a < 0 || b > 1 || b < a) throw std::out_of_range("variation interval must satisfy 0 <= a <= b <= 1");
  Walk w;
  struct Region {
    Rat lo, hi;
    std::optional<TailRegion> tail;
    std::optional<Move> jump_at_hi;
  };
  std::vector<Region> regions;
  for (const auto& g : p.gadgets()) {
    bool inside = g.side == Side::right ? (a <= g.accumulation && g.accumulation < b)
                                        : (a < g.accumulation && g.accumulation <= b);
    if (!inside) continue;
    if (g.divergent()) {
      w.divergent.push_back(g);
      continue;
    }
    const Rat& t = g.accumulation;
    for (long j = std::max(g.first_index, min_cut);; ++j) {
      Rat d = pow2(-2 * j);
      if (g.side == Side::right) {
        if (t + d > b || base_breakpoint_in(p, t, t + d, false, true)) continue;
        Rat from = p.base_at(t), to = p.base_at(t + d);
        if (from <= 0 || to <= 0) continue;
        regions.push_back({t, t + d, TailRegion{g, j, from, to}, std::nullopt});
      } else {
        if (t - d < a || base_breakpoint_in(p, t - d, t, true, false)) continue;
        Rat from = p.base_at(t - d), to = p.base_left_limit(t);
        if (from <= 0 || to <= 0) continue;
        Rat lim = p.left_limit(t), v = p(t);
        std::optional<Move> jump;
        if (lim != v) jump = Move{lim, v};
        regions.push_back({t - d, t, TailRegion{g, j, from, to}, jump});
      }
      break;
    }
  }
  if (!w.divergent.empty()) return w;
  std::sort(regions.begin(), regions.end(), [](const Region& x, const Region& y) { return x.lo < y.lo; });
  Rat cur = a;
  for (const auto& r : regions) {
    finite_moves(p, cur, r.lo, w.moves);
    w.tails.push_back(*r.tail);
    if (r.jump_at_hi) w.moves.push_back(*r.jump_at_hi);
    cur = r.hi;
  }
  finite_moves(p, cur, b, w.moves);
  return w;
}

enum class Sense { total, positive, negative };

inline Rat geometric_tail_factor(long cut) { return 1 + pow2(2 - cut); }  // >= prod_{j>=cut} (1+2^{-j})

inline VarValue<Rat> reduce_raw(const Walk& w, Sense sense) {
  if (!w.divergent.empty()) return VarValue<Rat>::infinite(to_string(w.divergent.front().family));
  VarValue<Rat> out;
  for (const auto& m : w.moves) {
    Rat d = m.to - m.from;
    if (sense == Sense::total) out.value += d < 0 ? Rat(-d) : d;
    else if (sense == Sense::positive && d > 0) out.value += d;
    else if (sense == Sense::negative && d < 0) out.value -= d;
  }
  for (const auto& t : w.tails) {
    out.kind = VarKind::convergent;
    out.certificate = to_string(t.gadget.family);
    Rat sup = rmax(abs(t.base_from), abs(t.base_to));
    Rat f = t.gadget.side == Side::left ? t.gadget.ratio(t.cut) : Rat(1);
    Rat drift = abs(Rat(t.base_to - t.base_from));
    out.tail += f * (sup * pow2(2 - t.cut) + drift);
  }
  return out;
}

inline VarValue<LogSum> reduce_log(const Walk& w, Sense sense) {
  if (!w.divergent.empty()) return VarValue<LogSum>::infinite(to_string(w.divergent.front().family));
  VarValue<LogSum> out;
  for (const auto& m : w.moves) {
    if (m.from < 0 || m.to < 0) throw std::invalid_argument("log variation needs a nonnegative path");
    if (m.from == 0 && m.to == 0) continue;
    if (m.to == 0) {  // falling into zero
      if (sense != Sense::positive) return VarValue<LogSum>::infinite("log-zero");
      continue;
    }
    if (m.from == 0) {  // recovering from zero
      if (sense != Sense::negative) return VarValue<LogSum>::infinite("log-zero");
      continue;
    }
    Rat q = m.to / m.from;
    if (sense == Sense::total) out.value.add(q > 1 ? q : Rat(1 / q));
    else if (sense == Sense::positive && q > 1) out.value.add(q);
    else if (sense == Sense::negative && q < 1) out.value.add(1 / q);
  }
  for (const auto& t : w.tails) {
    out.kind = VarKind::convergent;
    out.certificate = to_string(t.gadget.family);
    Rat drift = t.base_to / t.base_from;
    if (drift < 1) drift = 1 / drift;
    Rat osc = geometric_tail_factor(t.cut);
    out.tail.add(drift);
    out.tail.add(osc, sense == Sense::total ? 2 : 1);
  }
  return out;
}

}  // namespace detail

inline constexpr long default_tail_cut = 24;

inline VarValue<Rat> total_variation(const Path& p, const Rat& a = 0, const Rat& b = 1, long cut = default_tail_cut) {
  return detail::reduce_raw(detail::walk(p, a, b, cut), detail::Sense::total);
}
inline VarValue<Rat> positive_variation(const Path& p, const Rat& a = 0, const Rat& b = 1,
                                        long cut = default_tail_cut) {
  return detail::reduce_raw(detail::walk(p, a, b, cut), detail::Sense::positive);
}
inline VarValue<Rat> negative_variation(const Path& p, const Rat& a = 0, const Rat& b = 1,
                                        long cut = default_tail_cut) {
  return detail::reduce_raw(detail::walk(p, a, b, cut), detail::Sense::negative);
}
inline VarValue<LogSum> log_total_variation(const Path& p, const Rat& a = 0, const Rat& b = 1,
                                            long cut = default_tail_cut) {
  return detail::reduce_log(detail::walk(p, a, b, cut), detail::Sense::total);
}
inline VarValue<LogSum> log_positive_variation(const Path& p, const Rat& a = 0, const Rat& b = 1,
                                               long cut = default_tail_cut) {
  return detail::reduce_log(detail::walk(p, a, b, cut), detail::Sense::positive);
}
inline VarValue<LogSum> log_negative_variation(const Path& p, const Rat& a = 0, const Rat& b = 1,
                                               long cut = default_tail_cut) {
  return detail::reduce_log(detail::walk(p, a, b, cut), detail::Sense::negative);
}

// ---------------------------------------------------------------------------
// One-sided local variation: the limit of the variation over [t-e, t] (left)
// or [t, t+e] (right) as e -> 0.

namespace detail {

inline bool divergent_gadget_at(const Path& p, const Rat& t, Side side) {
  for (const auto& g : p.gadgets())
    if (g.accumulation == t && g.side == side && g.divergent()) return true;
  return false;
}

/// Moves that survive in every small one-sided window around t.
inline std::vector<Move> local_moves(const Path& p, const Rat& t, Side side) {
  std::vector<Move> out;
  if (side == Side::left) {
    Rat lim = p.left_limit(t), v = p(t);
    // A run that ends in zero keeps a nonzero log-increment in every window.
    if (lim == 0) {
      const Segment* before = nullptr;
      for (const auto& seg : p.segments())
        if (seg.start < t) before = &seg;
      if (before && before->slope != 0) out.push_back({Rat(1), Rat(0)});
    }
    if (lim != v) out.push_back({lim, v});
  } else {
    if (p(t) == 0 && p.piece_at(t).slope != 0) out.push_back({Rat(0), Rat(1)});
  }
  return out;
}

}  // namespace detail

inline VarValue<Rat> local_variation(const Path& p, const Rat& t, Side side, bool positive = false) {
  if (t < 0 || t > 1) throw std::out_of_range("time outside [0,1]");
  if ((side == Side::left && t == 0) || (side == Side::right && t == 1)) return {};
  if (detail::divergent_gadget_at(p, t, side)) return VarValue<Rat>::infinite("telescoping-harmonic");
  detail::Walk w;
  if (side == Side::left) {
    Rat lim = p.left_limit(t), v = p(t);
    if (lim != v) w.moves.push_back({lim, v});
  }
  return detail::reduce_raw(w, positive ? detail::Sense::positive : detail::Sense::total);
}

inline VarValue<LogSum> log_local_variation(const Path& p, const Rat& t, Side side, bool positive = false) {
  if (t < 0 || t > 1) throw std::out_of_range("time outside [0,1]");
  if ((side == Side::left && t == 0) || (side == Side::right && t == 1)) return {};
  if (detail::divergent_gadget_at(p, t, side)) return VarValue<LogSum>::infinite("telescoping-harmonic");
  detail::Walk w;
  w.moves = detail::local_moves(p, t, side);
  return detail::reduce_log(w, positive ? detail::Sense::positive : detail::Sense::total);
}

struct InfiniteVariationSets {
  std::set<Rat> I_minus, I_plus, J_minus, J_plus;
};

/// Times where the one-sided (positive) variation of log omega is infinite.
inline InfiniteVariationSets infinite_variation_sets(const Path& p) {
  std::set<Rat> candidates{Rat(0), Rat(1)};
  for (const auto& s : p.segments()) candidates.insert(s.start);
  for (const auto& g : p.gadgets()) candidates.insert(g.accumulation);
  InfiniteVariationSets out;
  for (const auto& t : candidates) {
    if (log_local_variation(p, t, Side::left).is_infinite()) out.I_minus.insert(t);
    if (log_local_variation(p, t, Side::right).is_infinite()) out.I_plus.insert(t);
    if (log_local_variation(p, t, Side::left, true).is_infinite()) out.J_minus.insert(t);
    if (log_local_variation(p, t, Side::right, true).is_infinite()) out.J_plus.insert(t);
  }
  return out;
}

/// Infinite log-variation on [0,1] exactly when some point has infinite
/// one-sided local variation.
inline bool decomposition_check(const Path& p) {
  auto sets = infinite_variation_sets(p);
  bool local = !sets.I_minus.empty() || !sets.I_plus.empty();
  return log_total_variation(p).is_infinite() == local;
}

}  // namespace gtp
