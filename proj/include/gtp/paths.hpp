#pragma once

// Exact piecewise price paths on [0,1].
//
// Every path is a right-continuous piecewise-affine base with exact rational
// breakpoints, optionally multiplied by "gadgets": infinite families of
// multiplicative jumps accumulating at a single time from one side. Gadgets
// are how paths with infinite log-variation near a point are represented.

#include <gtp/errors.hpp>
#include <gtp/rational.hpp>

#include <algorithm>
#include <compare>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace gtp {

enum class PathKind { step, linear, piecewise, gadget };
enum class Side { left, right };
enum class GadgetFamily { telescoping_harmonic, geometric_convergent };
enum class ZeroClass { A, B, C };

inline const char* to_string(PathKind k) {
  switch (k) {
    case PathKind::step: return "step";
    case PathKind::linear: return "linear";
    case PathKind::piecewise: return "piecewise";
    case PathKind::gadget: return "gadget";
  }
  return "?";
}
inline const char* to_string(Side s) { return s == Side::left ? "left" : "right"; }
inline const char* to_string(GadgetFamily f) {
  return f == GadgetFamily::telescoping_harmonic ? "telescoping-harmonic" : "geometric-convergent";
}
inline const char* to_string(ZeroClass z) {
  switch (z) {
    case ZeroClass::A: return "A";
    case ZeroClass::B: return "B";
    case ZeroClass::C: return "C";
  }
  return "?";
}

/// Affine piece of a base path: value + slope * (t - start) on [start, next start).
struct Segment {
  Rat start;
  Rat value;
  Rat slope = 0;
  bool operator==(const Segment&) const = default;
};

struct GadgetStep {
  Rat time;
  Rat factor;  // jump ratio omega(time) / omega(time-)
  long index;  // pair index j
  bool up;
};

/// One accumulating family of paired jumps. Pair j >= first_index consists
/// of an up-jump by ratio(j) and a down-jump by 1/ratio(j), placed at
/// distances 2^{-2j} and 2^{-2j-1} from the accumulation time. A right gadget
/// dips first (down at t*+2^{-2j-1}, up at t*+2^{-2j}); a left gadget rises
/// first (up at t*-2^{-2j}, down at t*-2^{-2j-1}). Either way the value
/// between pairs equals the base value, so the path stays càdlàg at t*.
struct Gadget {
  Rat accumulation;
  Side side = Side::right;
  GadgetFamily family = GadgetFamily::telescoping_harmonic;
  long first_index = 1;

  bool operator==(const Gadget&) const = default;

  Rat ratio(long j) const {
    if (family == GadgetFamily::telescoping_harmonic) return Rat(j + 1, j);
    return 1 + pow2(-j);
  }

  bool divergent() const { return family == GadgetFamily::telescoping_harmonic; }

  long first_exponent() const { return 2 * first_index; }

  GadgetStep step(long k) const {
    long j = k / 2;
    bool up = (k % 2 == 0);
    Rat off = pow2(-k);
    Rat time = side == Side::right ? accumulation + off : accumulation - off;
    Rat f = ratio(j);
    return {time, up ? f : Rat(1 / f), j, up};
  }

  /// Closed hull of all step times.
  Rat hull_lo() const { return side == Side::right ? accumulation : accumulation - pow2(-first_exponent()); }
  Rat hull_hi() const { return side == Side::right ? accumulation + pow2(-first_exponent()) : accumulation; }

  std::optional<long> exponent_of(const Rat& t) const {
    Rat d = side == Side::right ? Rat(t - accumulation) : Rat(accumulation - t);
    if (d <= 0) return std::nullopt;
    long e = floor_log2(d);
    if (pow2(e) != d || -e < first_exponent()) return std::nullopt;
    return -e;
  }

  bool is_step_time(const Rat& t) const { return exponent_of(t).has_value(); }

  /// Product of the jump ratios of all steps at times <= t.
  Rat factor_at(const Rat& t) const {
    if (side == Side::right) {
      if (t <= accumulation) return 1;
      Rat d = t - accumulation;
      long k = -floor_log2(d);  // most recent step: t* + 2^{-k} <= t
      if (k < first_exponent()) return 1;
      return (k % 2 == 1) ? Rat(1 / ratio(k / 2)) : Rat(1);
    }
    if (t >= accumulation) return 1;
    Rat d = accumulation - t;
    long e = floor_log2(d);
    long k = (pow2(e) == d) ? -e : -e - 1;  // largest k with 2^{-k} >= d
    if (k < first_exponent()) return 1;
    return (k % 2 == 0) ? ratio(k / 2) : Rat(1);
  }

  Rat left_factor_at(const Rat& t) const {
    Rat f = factor_at(t);
    if (auto k = exponent_of(t)) f /= step(*k).factor;
    return f;
  }

  /// True when [lo, hi) meets infinitely many steps.
  bool infinite_in(const Rat& lo, const Rat& hi) const {
    if (side == Side::right) return lo <= accumulation && accumulation < hi;
    return lo < accumulation && accumulation <= hi;
  }

  /// Steps with time in [lo, hi), in increasing time order.
  std::vector<GadgetStep> steps_in(const Rat& lo, const Rat& hi) const {
    if (infinite_in(lo, hi))
      throw UnresolvedError("window [" + gtp::to_string(lo) + ", " + gtp::to_string(hi) +
                            ") meets infinitely many gadget steps");
    std::vector<GadgetStep> out;
    if (side == Side::right) {
      if (hi <= accumulation) return out;
      Rat d = lo - accumulation;  // > 0 here
      long e = floor_log2(d);
      long kmax = (pow2(e) == d) ? -e : -e - 1;
      for (long k = kmax; k >= first_exponent(); --k) {
        GadgetStep s = step(k);
        if (s.time >= hi) break;
        if (s.time >= lo) out.push_back(s);
      }
      return out;
    }
    if (lo >= accumulation) return out;
    for (long k = first_exponent();; ++k) {
      GadgetStep s = step(k);
      if (s.time >= hi) break;
      if (s.time >= lo) out.push_back(s);
    }
    return out;
  }
};

/// Maximal affine run of a full path, used for exact comparisons and sums.
struct Piece {
  Rat start;
  Rat value;  // value at start
  Rat slope;
  Rat at(const Rat& t) const { return value + slope * (t - start); }
};

/// Sup of prefix agreement: the two paths agree on [0, time] (closed) or
/// [0, time) (!closed).
struct Agreement {
  Rat time;
  bool closed = false;

  bool operator==(const Agreement&) const = default;
  std::strong_ordering operator<=>(const Agreement& o) const {
    if (time < o.time) return std::strong_ordering::less;
    if (time > o.time) return std::strong_ordering::greater;
    return static_cast<int>(closed) <=> static_cast<int>(o.closed);
  }
};

inline std::ostream& operator<<(std::ostream& os, const Agreement& a) {
  return os << "(" << gtp::to_string(a.time) << (a.closed ? ", closed)" : ", open)");
}

class Path {
 public:
  Path() : segs_{{Rat(0), Rat(1), Rat(0)}} { kind_ = PathKind::step; }

  static Path constant(const Rat& v) { return step({{Rat(0), v}}); }

  /// Right-continuous step path; points are (breakpoint, value on [breakpoint, next)).
  static Path step(const std::vector<std::pair<Rat, Rat>>& points, bool canonical = true) {
    std::vector<Segment> segs;
    for (const auto& [t, v] : points) segs.push_back({t, v, 0});
    Path p;
    p.canonical_ = canonical;
    p.segs_ = std::move(segs);
    p.validate_and_normalize();
    return p;
  }

  /// Continuous interpolation through nodes (t, v); nodes must cover [0, 1].
  static Path linear(const std::vector<std::pair<Rat, Rat>>& nodes) {
    if (nodes.size() < 2 || nodes.front().first != 0 || nodes.back().first != 1)
      throw std::invalid_argument("linear path needs nodes at 0 and 1");
    std::vector<Segment> segs;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      const auto& [t0, v0] = nodes[i];
      const auto& [t1, v1] = nodes[i + 1];
      if (!(t0 < t1)) throw std::invalid_argument("linear path nodes must be strictly increasing");
      segs.push_back({t0, v0, (v1 - v0) / (t1 - t0)});
    }
    Path p;
    p.segs_ = std::move(segs);
    p.validate_and_normalize();
    return p;
  }

  static Path piecewise(std::vector<Segment> segs) {
    Path p;
    p.segs_ = std::move(segs);
    p.validate_and_normalize();
    return p;
  }

  static Path with_gadgets(const Path& base, std::vector<Gadget> gadgets) {
    if (!base.gadgets_.empty()) throw std::invalid_argument("gadget base must not carry gadgets");
    Path p = base;
    p.gadgets_ = std::move(gadgets);
    p.validate_and_normalize();
    return p;
  }

  PathKind kind() const { return kind_; }
  bool canonical() const { return canonical_; }
  const std::vector<Segment>& segments() const { return segs_; }
  const std::vector<Gadget>& gadgets() const { return gadgets_; }
  bool has_gadgets() const { return !gadgets_.empty(); }
  bool is_step_base() const {
    return std::all_of(segs_.begin(), segs_.end(), [](const Segment& s) { return s.slope == 0; });
  }

  Path base() const {
    Path b = *this;
    b.gadgets_.clear();
    b.validate_and_normalize();
    return b;
  }

  Rat base_at(const Rat& t) const {
    check_time(t);
    const Segment& s = segment_at(t);
    return s.value + s.slope * (t - s.start);
  }

  Rat base_left_limit(const Rat& t) const {
    check_time(t);
    if (t == 0) return base_at(t);
    auto it = std::lower_bound(segs_.begin(), segs_.end(), t,
                               [](const Segment& s, const Rat& x) { return s.start < x; });
    const Segment& s = *(it - 1);
    return s.value + s.slope * (t - s.start);
  }

  Rat gadget_factor(const Rat& t) const {
    Rat f = 1;
    for (const auto& g : gadgets_) f *= g.factor_at(t);
    return f;
  }

  Rat operator()(const Rat& t) const { return at(t); }
  Rat at(const Rat& t) const { return base_at(t) * gadget_factor(t); }

  Rat left_limit(const Rat& t) const {
    Rat f = 1;
    for (const auto& g : gadgets_) f *= g.left_factor_at(t);
    return base_left_limit(t) * f;
  }

  /// Breakpoints of the base (segment starts other than 0).
  std::vector<Rat> base_breakpoints() const {
    std::vector<Rat> out;
    for (std::size_t i = 1; i < segs_.size(); ++i) out.push_back(segs_[i].start);
    return out;
  }

  bool is_gadget_step_time(const Rat& t) const {
    return std::any_of(gadgets_.begin(), gadgets_.end(), [&](const Gadget& g) { return g.is_step_time(t); });
  }

  /// All jump/slope-change candidates in [lo, hi), sorted; throws when a
  /// gadget puts infinitely many there.
  std::vector<Rat> breakpoints_in(const Rat& lo, const Rat& hi) const {
    std::vector<Rat> out;
    for (const auto& s : segs_)
      if (s.start >= lo && s.start < hi) out.push_back(s.start);
    for (const auto& g : gadgets_)
      for (const auto& st : g.steps_in(lo, hi)) out.push_back(st.time);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  /// Affine runs covering [lo, hi). Finite by contract; see breakpoints_in.
  std::vector<Piece> pieces(const Rat& lo, const Rat& hi) const {
    std::vector<Piece> out;
    if (!(lo < hi)) return out;
    auto bps = breakpoints_in(lo, hi);
    if (bps.empty() || bps.front() != lo) bps.insert(bps.begin(), lo);
    for (const auto& b : bps) out.push_back(piece_at(b));
    return out;
  }

  std::vector<Piece> base_pieces(const Rat& lo, const Rat& hi) const {
    std::vector<Piece> out;
    if (!(lo < hi)) return out;
    out.push_back({lo, base_at(lo), segment_at(lo).slope});
    for (const auto& s : segs_)
      if (s.start > lo && s.start < hi) out.push_back({s.start, s.value, s.slope});
    return out;
  }

  Piece piece_at(const Rat& t) const {
    return {t, at(t), segment_at(t).slope * gadget_factor(t)};
  }

  /// Equal to this path on [0, u) and to r times this path on [u, 1].
  Path scaled_from(const Rat& u, const Rat& r) const {
    check_time(u);
    std::vector<Segment> segs;
    for (const auto& s : segs_) {
      if (s.start < u) segs.push_back(s);
    }
    segs.push_back({u, base_at(u) * r, segment_at(u).slope * r});
    for (const auto& s : segs_)
      if (s.start > u) segs.push_back({s.start, s.value * r, s.slope * r});
    Path p = *this;
    p.segs_ = std::move(segs);
    p.canonical_ = true;
    p.validate_and_normalize(/*derived=*/true);
    return p;
  }

  /// Equal to this path on [0, u] and to this path plus rho (t - u) after.
  Path drifted_from(const Rat& u, const Rat& rho) const {
    check_time(u);
    if (has_gadgets()) throw std::invalid_argument("drift continuation needs a gadget-free path");
    std::vector<Segment> segs;
    for (const auto& s : segs_)
      if (s.start < u) segs.push_back(s);
    segs.push_back({u, base_at(u), segment_at(u).slope + rho});
    for (const auto& s : segs_)
      if (s.start > u) segs.push_back({s.start, s.value + rho * (s.start - u), s.slope + rho});
    Path p = *this;
    p.segs_ = std::move(segs);
    p.canonical_ = true;
    p.validate_and_normalize();
    return p;
  }

  /// Accumulation times of all gadgets.
  std::vector<Rat> accumulation_points() const {
    std::vector<Rat> out;
    for (const auto& g : gadgets_) out.push_back(g.accumulation);
    return out;
  }

 private:
  PathKind kind_ = PathKind::step;
  bool canonical_ = true;
  std::vector<Segment> segs_;
  std::vector<Gadget> gadgets_;

  static void check_time(const Rat& t) {
    if (t < 0 || t > 1) throw std::out_of_range("time " + gtp::to_string(t) + " outside [0,1]");
  }

  const Segment& segment_at(const Rat& t) const {
    auto it = std::upper_bound(segs_.begin(), segs_.end(), t,
                               [](const Rat& x, const Segment& s) { return x < s.start; });
    return *(it - 1);
  }

  // Derived paths (deviations of a gadget path) may put a base breakpoint on
  // a gadget step time; paths built from user input may not.
  void validate_and_normalize(bool derived = false) {
    if (segs_.empty() || segs_.front().start != 0) throw std::invalid_argument("path must start at time 0");
    for (std::size_t i = 0; i < segs_.size(); ++i) {
      if (segs_[i].start < 0 || segs_[i].start > 1) throw std::invalid_argument("breakpoint outside [0,1]");
      if (i > 0 && !(segs_[i - 1].start < segs_[i].start))
        throw std::invalid_argument("breakpoints must be strictly increasing");
    }
    if (canonical_) {
      std::vector<Segment> merged{segs_.front()};
      for (std::size_t i = 1; i < segs_.size(); ++i) {
        const Segment& prev = merged.back();
        const Segment& cur = segs_[i];
        bool continuous = prev.value + prev.slope * (cur.start - prev.start) == cur.value;
        if (continuous && prev.slope == cur.slope) continue;
        merged.push_back(cur);
      }
      segs_ = std::move(merged);
    }
    for (std::size_t i = 0; i < gadgets_.size(); ++i) {
      const Gadget& g = gadgets_[i];
      if (g.first_index < 1) throw std::invalid_argument("gadget first_index must be >= 1");
      if (g.side == Side::right && !(g.accumulation >= 0 && g.hull_hi() <= 1))
        throw std::invalid_argument("right gadget steps must lie in (t*, 1]");
      if (g.side == Side::left && !(g.hull_lo() > 0 && g.accumulation <= 1))
        throw std::invalid_argument("left gadget steps must lie in (0, t*)");
      if (!derived)
        for (const auto& s : segs_)
          if (g.is_step_time(s.start)) throw std::invalid_argument("base breakpoint collides with a gadget step");
      for (std::size_t k = 0; k < i; ++k) {
        const Gadget& h = gadgets_[k];
        if (!(g.hull_hi() < h.hull_lo() || h.hull_hi() < g.hull_lo()) &&
            !(g.accumulation == h.accumulation && g.side != h.side))
          throw std::invalid_argument("gadget step ranges overlap");
      }
      if (base_at(g.accumulation) == 0 || base_left_limit(g.accumulation) == 0)
        throw std::invalid_argument("gadget placed where the base vanishes");
    }
    std::sort(gadgets_.begin(), gadgets_.end(), [](const Gadget& a, const Gadget& b) {
      if (a.accumulation != b.accumulation) return a.accumulation < b.accumulation;
      return a.side == Side::left && b.side == Side::right;
    });
    if (!gadgets_.empty()) {
      kind_ = PathKind::gadget;
    } else if (is_step_base()) {
      kind_ = PathKind::step;
    } else {
      bool continuous = true;
      for (std::size_t i = 1; i < segs_.size(); ++i) {
        const Segment& a = segs_[i - 1];
        if (a.value + a.slope * (segs_[i].start - a.start) != segs_[i].value) continuous = false;
      }
      kind_ = continuous ? PathKind::linear : PathKind::piecewise;
    }
  }
};

// ---------------------------------------------------------------------------
// Prefix comparison

namespace detail {

/// First disagreement of two piece lists on [lo, hi), if any.
inline std::optional<Agreement> first_difference(const std::vector<Piece>& p, const std::vector<Piece>& q,
                                                 const Rat& lo, const Rat& hi) {
  if (!(lo < hi)) return std::nullopt;
  std::vector<Rat> cuts;
  for (const auto& x : p) cuts.push_back(x.start);
  for (const auto& x : q) cuts.push_back(x.start);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::size_t ip = 0, iq = 0;
  for (const auto& u : cuts) {
    while (ip + 1 < p.size() && p[ip + 1].start <= u) ++ip;
    while (iq + 1 < q.size() && q[iq + 1].start <= u) ++iq;
    Rat pv = p[ip].at(u), qv = q[iq].at(u);
    if (pv != qv) return Agreement{u, false};
    if (p[ip].slope != q[iq].slope) return Agreement{u, true};
  }
  return std::nullopt;
}

inline const Gadget* find_gadget(const Path& p, const Rat& t, Side side) {
  for (const auto& g : p.gadgets())
    if (g.accumulation == t && g.side == side) return &g;
  return nullptr;
}

inline bool tail_equivalent(const Gadget* a, const Gadget* b) {
  return a && b && a->family == b->family;
}

}  // namespace detail

/// Supremum of prefix agreement of two paths, decided exactly.
inline Agreement agreement_time(const Path& p, const Path& q) {
  using detail::find_gadget;
  using detail::first_difference;
  std::vector<std::pair<Rat, Side>> acc;
  for (const Path* x : {&p, &q})
    for (const auto& g : x->gadgets()) acc.emplace_back(g.accumulation, g.side);
  std::sort(acc.begin(), acc.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second == Side::left && b.second == Side::right;
  });
  acc.erase(std::unique(acc.begin(), acc.end()), acc.end());

  Rat u = 0;
  auto compare_window = [&](const Rat& lo, const Rat& hi) {
    return first_difference(p.pieces(lo, hi), q.pieces(lo, hi), lo, hi);
  };
  auto compare_bases = [&](const Rat& lo, const Rat& hi) {
    return first_difference(p.base_pieces(lo, hi), q.base_pieces(lo, hi), lo, hi);
  };

  for (const auto& [alpha, side] : acc) {
    if (alpha < u) continue;
    if (side == Side::left) {
      const Gadget* gp = find_gadget(p, alpha, Side::left);
      const Gadget* gq = find_gadget(q, alpha, Side::left);
      if (detail::tail_equivalent(gp, gq)) {
        long j = std::max(gp->first_index, gq->first_index);
        Rat x = rmax(u, alpha - pow2(-2 * j));
        if (auto d = compare_window(u, x)) return *d;
        if (auto d = compare_bases(x, alpha)) return *d;
      } else {
        long j = std::min(gp ? gp->first_index : 1L << 30, gq ? gq->first_index : 1L << 30);
        Rat lo = u;
        for (long guard = 0;; ++j, ++guard) {
          if (guard > 200000) throw UnresolvedError("left accumulation comparison did not terminate");
          Rat x = alpha - pow2(-2 * j);
          if (x <= lo) continue;
          if (auto d = compare_window(lo, x)) return *d;
          lo = x;
        }
      }
      u = alpha;
    } else {
      if (auto d = compare_window(u, alpha)) return *d;
      if (p.at(alpha) != q.at(alpha)) return {alpha, false};
      const Gadget* gp = find_gadget(p, alpha, Side::right);
      const Gadget* gq = find_gadget(q, alpha, Side::right);
      if (!detail::tail_equivalent(gp, gq)) return {alpha, true};
      long j = std::max(gp->first_index, gq->first_index);
      Rat x = alpha + pow2(-2 * j);
      if (auto d = compare_bases(alpha, x)) return *d;
      u = x;
    }
  }
  if (auto d = compare_window(u, Rat(1))) return *d;
  if (p.at(1) != q.at(1)) return {Rat(1), false};
  return {Rat(1), true};
}

/// Whether p and q agree on [0,t] (closed) or [0,t) (open).
inline bool prefix_equal(const Path& p, const Path& q, const Rat& t, bool closed) {
  if (t < 0 || t > 1) throw std::out_of_range("time outside [0,1]");
  Agreement a = agreement_time(p, q);
  if (t < a.time) return true;
  if (t > a.time) return false;
  return a.closed || !closed;
}

inline bool identical(const Path& p, const Path& q) { return agreement_time(p, q) == Agreement{Rat(1), true}; }

// ---------------------------------------------------------------------------
// Zero behaviour of nonnegative paths

inline ZeroClass classify_zero_behavior(const Path& path) {
  const auto& segs = path.segments();
  // Per segment: strictly positive on its span, identically zero, or mixed.
  enum class Sign { positive, zero, mixed };
  std::vector<Sign> signs;
  bool inf_positive = true;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const Segment& s = segs[i];
    Rat end = i + 1 < segs.size() ? segs[i + 1].start : Rat(1);
    Rat v0 = s.value, v1 = s.value + s.slope * (end - s.start);
    if (v0 < 0 || v1 < 0) throw std::invalid_argument("zero classification needs a nonnegative path");
    if (v0 > 0 && v1 > 0) {
      signs.push_back(Sign::positive);
    } else if (v0 == 0 && s.slope == 0) {
      signs.push_back(Sign::zero);
      inf_positive = false;
    } else if (v0 > 0 && v1 == 0 && i + 1 == segs.size()) {
      // Reaches zero only at t = 1, inside the closed last segment.
      signs.push_back(Sign::mixed);
      inf_positive = false;
    } else {
      signs.push_back(Sign::mixed);
      inf_positive = false;
    }
  }
  if (inf_positive) return ZeroClass::A;
  // B: positive on [0,t) and zero on [t,1].
  std::size_t i = 0;
  while (i < signs.size() && signs[i] == Sign::positive) ++i;
  if (i == signs.size()) return ZeroClass::A;
  if (signs[i] == Sign::mixed) {
    // The only admissible mixed piece is the last one, hitting 0 exactly at 1
    // or starting positive and decreasing linearly to 0 at its end, after
    // which everything must be zero.
    const Segment& s = segs[i];
    Rat end = i + 1 < segs.size() ? segs[i + 1].start : Rat(1);
    bool decays = s.value > 0 && s.value + s.slope * (end - s.start) == 0;
    if (!decays) return ZeroClass::C;
    if (i + 1 == segs.size()) return ZeroClass::B;
    ++i;
  }
  for (; i < signs.size(); ++i)
    if (signs[i] != Sign::zero) return ZeroClass::C;
  return ZeroClass::B;
}

}  // namespace gtp
