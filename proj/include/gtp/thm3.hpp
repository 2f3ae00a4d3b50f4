#pragma once

// The strategy that makes a path null once its log has infinite positive
// variation immediately to the right of some time a.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "gtp/thm1.hpp"
#include "gtp/variation.hpp"

namespace gtp {

/// Everything component n derives from the realized path.
struct Thm3Window {
  Rat a;      // inf I+
  Path pred;  // prediction just after a
  Rat L;      // every t in (a, L] has var+ > n on its window
  Rat c, d, D;
  Rat growth;  // product of up-ratios of pred on (d, D]
  long n = 0;
};

namespace detail {

inline Rat window_end(const Rat& t, long n) { return rmin(t + pow2(-n), Rat(1)); }

inline VarValue<LogSum> window_var(const Path& p, const Rat& t, long n) {
  return log_positive_variation(p, t, window_end(t, n));
}

// Jump times of p in (lo, hi].
inline std::vector<Rat> jumps_in(const Path& p, const Rat& lo, const Rat& hi) {
  std::vector<Rat> out;
  if (!(lo < hi)) return out;
  for (const auto& b : p.breakpoints_in(lo, hi))
    if (b > lo && p(b) != p.left_limit(b)) out.push_back(b);
  if (p(hi) != p.left_limit(hi)) out.push_back(hi);
  return out;
}

// var+ > n on [t, t + 2^-n]; a convergent tail counts only when the exact
// part already clears n.
inline bool window_exceeds(const Path& p, const Rat& t, long n) {
  auto v = window_var(p, t, n);
  if (v.is_infinite()) return true;
  return v.value.compare_with(n) > 0;
}

inline bool window_within(const Path& p, const Rat& t, long n) {
  auto v = window_var(p, t, n);
  if (v.is_infinite()) return false;
  if (v.kind == VarKind::convergent) return (v.value + v.tail).compare_with(n) <= 0;
  return v.value.compare_with(n) <= 0;
}

}  // namespace detail

/// The window of component n for the prediction `pred` made just after a.
inline Thm3Window thm3_window_for(const Path& pred, const Rat& a, long n) {
  Thm3Window win;
  win.n = n;
  win.a = a;
  win.pred = pred;
  const Path& p = win.pred;
  if (!p.is_step_base()) throw UnresolvedError("window search needs a step-function prediction");
  const Rat A = detail::window_end(win.a, n);

  // Cutoff: the smallest dyadic offset 2^-m with var+ on [a + 2^-m, A] > n.
  // Every t in (a, a + 2^-m] has a window covering that stretch.
  auto exceeds_from = [&](long m) {
    Rat from = win.a + pow2(-m);
    if (from >= A) return false;
    auto v = log_positive_variation(p, from, A);
    return v.is_infinite() || v.value.compare_with(n) > 0;
  };
  long lo = n, hi = n + 1;  // exceeds_from(lo) is false
  while (!exceeds_from(hi)) {
    lo = hi;
    hi *= 2;
    if (hi > (1L << 16)) throw UnresolvedError("no cutoff after a with var+ above " + std::to_string(n));
  }
  while (hi - lo > 1) {
    long mid = (lo + hi) / 2;
    if (exceeds_from(mid)) hi = mid;
    else lo = mid;
  }
  win.L = win.a + pow2(-hi);

  // var+ on the window [t, t + h] only changes where t or t + h meets an
  // up-jump of p, so the infimum is attained at one of those candidates.
  const Rat h = pow2(-n);
  std::vector<Rat> cand{win.L};
  Rat top = rmin(A + h, Rat(1));
  if (win.L < top) {
    for (const auto& b : p.breakpoints_in(win.L, top)) {
      if (b > win.L && b <= A) cand.push_back(b);
      if (b - h > win.L && b - h <= A) cand.push_back(b - h);
    }
  }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  win.c = A;
  for (const auto& t : cand) {
    if (t <= win.a || t > A) continue;
    if (detail::window_within(p, t, n)) {
      win.c = t;
      break;
    }
    if (!detail::window_exceeds(p, t, n)) throw UnresolvedError("window variation too close to n to decide");
  }
  win.d = (win.a + win.c) / 2;
  win.D = detail::window_end(win.d, n);
  win.growth = 1;
  for (const auto& b : detail::jumps_in(p, win.d, win.D)) {
    Rat q = p(b) / p.left_limit(b);
    if (q > 1) win.growth *= q;
  }
  return win;
}

/// inf I+ of w and the member predicting w just after it, or nothing when
/// I+ is empty or no member agrees.
inline std::optional<std::pair<Rat, Prediction>> thm3_anchor(const WellOrderedFamily& family, const Path& w) {
  auto sets = infinite_variation_sets(w);
  if (sets.I_plus.empty()) return std::nullopt;
  Rat a = *sets.I_plus.begin();
  if (a >= 1) return std::nullopt;
  try {
    return std::pair{a, predict(family, w, a, PredictMode::right)};
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

/// The window of component n, or nothing when I+ is empty or nothing in the
/// family predicts the path just after a.
inline std::optional<Thm3Window> thm3_window(const WellOrderedFamily& family, const Path& w, long n) {
  auto anchor = thm3_anchor(family, w);
  if (!anchor) return std::nullopt;
  return thm3_window_for(anchor->second.path, anchor->first, n);
}

/// Component n: all-in on [p, s) before each up-jump s of the prediction in
/// (d, D], out otherwise, followed only while the path matches it.
inline PlannedStrategy thm3_component(const WellOrderedFamily& family, long n) {
  PlannedStrategy ps;
  ps.name = "thm3-n" + std::to_string(n);
  // The window depends on w only through a and the predicting member.
  using Key = std::pair<std::string, OrdinalIndex>;
  auto cache = std::make_shared<std::map<Key, std::shared_ptr<const Thm3Window>>>();
  auto lock = std::make_shared<std::mutex>();
  ps.plan = [family, n, cache, lock](const Path& w) -> std::optional<Plan> {
    auto anchor = thm3_anchor(family, w);
    if (!anchor) return std::nullopt;
    Key key{to_string(anchor->first), anchor->second.index};
    std::shared_ptr<const Thm3Window> win;
    {
      std::lock_guard<std::mutex> g(*lock);
      if (auto it = cache->find(key); it != cache->end()) win = it->second;
    }
    if (!win) {
      win = std::make_shared<const Thm3Window>(thm3_window_for(anchor->second.path, anchor->first, n));
      std::lock_guard<std::mutex> g(*lock);
      cache->emplace(key, win);
    }
    if (compare_with_exp(win->growth, static_cast<unsigned>(n)) <= 0)
      throw UnresolvedError("window [" + to_string(win->d) + ", " + to_string(win->D) +
                            "] cannot reach e^" + std::to_string(n));
    const Path& p = win->pred;
    Plan plan{p, {}};
    Rat prev = win->d;
    bool holding = false;
    for (const auto& b : detail::jumps_in(p, win->d, win->D)) {
      bool up = p(b) > p.left_limit(b);
      if (up && !holding) plan.steps.push_back({prev, Rat(1), std::nullopt, prev});
      if (!up && holding) plan.steps.push_back({prev, Rat(0), std::nullopt, prev});
      holding = up;
      prev = b;
    }
    if (holding) plan.steps.push_back({prev, Rat(0), std::nullopt, prev});
    return plan;
  };
  return ps;
}

struct Thm3Options {
  long n_min = 1, n_max = 6;
  bool shifted = false;
};

/// Sum over n of components with initial capital 1/n^2; the tail budget
/// 1/n_max bounds the rest of the series.
inline Mixture build_thm3_strategy(const WellOrderedFamily& family, const Thm3Options& opt = {}) {
  if (opt.n_min < 1 || opt.n_max < opt.n_min) throw std::invalid_argument("bad thm3 component range");
  Mixture m;
  m.name = opt.shifted ? "thm3-shifted" : "thm3";
  for (long n = opt.n_min; n <= opt.n_max; ++n) {
    PlannedStrategy ps = thm3_component(family, n);
    if (opt.shifted) ps = strengthen_predictability(ps);
    m.components.push_back({realize(ps), Rat(1, n * n), n});
  }
  m.tail_budget = Rat(1, opt.n_max);
  return m;
}

}  // namespace gtp
