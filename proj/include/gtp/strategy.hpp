#pragma once

// Simple trading strategies as event programs, their capital processes,
// positive mixtures, and probe-based validation.

#include <algorithm>
#include <any>
#include <cstdlib>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gtp/errors.hpp"
#include "gtp/paths.hpp"
#include "gtp/rational.hpp"

namespace gtp {

enum class Grade { plain, predictable, strongly_predictable };

inline const char* to_string(Grade g) {
  switch (g) {
    case Grade::plain: return "plain";
    case Grade::predictable: return "predictable";
    case Grade::strongly_predictable: return "strongly_predictable";
  }
  return "?";
}

/// What the program sees when called at its current stopping point.
struct EventState {
  long k = 1;
  Rat tau = 0;
  Rat capital = 0;
  std::any memo;
};

/// Bet held on [tau, next_time). A relative bet is a fraction of capital.
struct Decision {
  Rat bet = 0;
  bool relative = false;
  Rat next_time = 1;
  // Time up to which the path fixes this event's time and bet, if known.
  std::optional<Rat> determined_at;
  std::any memo;
};

using EventProgram = std::function<Decision(const Path&, const EventState&)>;

struct SimpleStrategy {
  std::string name;
  EventProgram next;
  Grade claimed_grade = Grade::plain;
  std::optional<Rat> bet_bound;
};

struct Event {
  long k = 0;
  Rat tau;
  Rat next_time;
  Rat bet;                   // absolute h_k
  std::optional<Rat> H;      // relative bet, when defined
  Rat capital;               // capital at tau
  std::optional<Rat> determined_at;
};

struct Trace {
  Rat initial;
  std::vector<Event> events;
  Rat final_capital;
};

inline long event_cap() {
  if (const char* env = std::getenv("GTP_EVENT_CAP")) {
    long v = std::atol(env);
    if (v > 0) return v;
  }
  return 1000000;
}

/// Runs the event program on w until its stopping time reaches 1.
inline Trace run_strategy(const SimpleStrategy& s, const Rat& c, const Path& w) {
  const long cap = event_cap();
  Trace tr;
  tr.initial = c;
  Rat tau = 0, K = c;
  std::any memo;
  for (long k = 1; tau < 1; ++k) {
    if (k > cap)
      throw UnresolvedError("strategy '" + s.name + "' exceeded the event cap of " + std::to_string(cap));
    Decision d = s.next(w, EventState{k, tau, K, std::move(memo)});
    if (d.next_time < tau || d.next_time > 1)
      throw InvariantViolation("strategy '" + s.name + "' emitted a stopping time out of order");
    Rat price = w(tau);
    Event e{k, tau, d.next_time, 0, std::nullopt, K, d.determined_at};
    if (d.relative) {
      e.H = d.bet;
      if (d.bet != 0) {
        if (price == 0) throw InvariantViolation("relative bet at a zero price");
        e.bet = d.bet * K / price;
      }
    } else {
      e.bet = d.bet;
      if (K != 0) e.H = d.bet * price / K;
      else if (d.bet == 0) e.H = Rat(0);
    }
    if (s.bet_bound && abs(e.bet) > *s.bet_bound)
      throw InvariantViolation("strategy '" + s.name + "' bet " + to_string(e.bet) + " exceeds its bound " +
                               to_string(*s.bet_bound));
    K += e.bet * (w(d.next_time) - price);
    tau = d.next_time;
    memo = std::move(d.memo);
    tr.events.push_back(std::move(e));
  }
  tr.final_capital = K;
  return tr;
}

/// c + sum_k h_k (w(tau_{k+1} ^ t) - w(tau_k ^ t)).
inline Rat capital_at(const Trace& tr, const Path& w, const Rat& t) {
  Rat K = tr.initial;
  for (const auto& e : tr.events) {
    if (e.tau >= t) break;
    if (e.bet != 0) K += e.bet * (w(rmin(e.next_time, t)) - w(e.tau));
  }
  return K;
}

inline Rat evaluate_simple_capital(const SimpleStrategy& s, const Rat& c, const Path& w, const Rat& t) {
  if (t < 0 || t > 1) throw std::out_of_range("time outside [0,1]");
  return capital_at(run_strategy(s, c, w), w, t);
}

struct CurvePoint {
  Rat t;
  Rat capital;
  Rat left;  // left limit of the capital at t
};

/// Capital at every event and at every price breakpoint inside a betting
/// interval; between consecutive points the capital is affine in w(t).
struct CapitalCurve {
  std::vector<CurvePoint> points;
  Rat min_value;  // infimum over [0, horizon], left limits included
};

inline CapitalCurve capital_curve(const Trace& tr, const Path& w, const Rat& horizon = 1) {
  CapitalCurve cc;
  cc.points.push_back({0, tr.initial, tr.initial});
  cc.min_value = tr.initial;
  auto note = [&](const Rat& t, const Rat& v, const Rat& left) {
    if (cc.points.back().t == t) {
      cc.points.back().capital = v;
    } else {
      cc.points.push_back({t, v, left});
    }
    cc.min_value = rmin(cc.min_value, rmin(v, left));
  };
  for (const auto& e : tr.events) {
    if (e.tau >= horizon) break;
    Rat end = rmin(e.next_time, horizon);
    if (e.bet == 0 || e.tau == end) {
      note(end, e.capital, e.capital);
      continue;
    }
    Rat p0 = w(e.tau);
    auto pcs = w.pieces(e.tau, end);
    for (std::size_t i = 0; i < pcs.size(); ++i) {
      const Piece& pc = pcs[i];
      Rat stop = i + 1 < pcs.size() ? pcs[i + 1].start : end;
      Rat v = e.capital + e.bet * (pc.value - p0);
      Rat left = i == 0 ? v : e.capital + e.bet * (pcs[i - 1].at(pc.start) - p0);
      note(pc.start, v, left);
      Rat at_stop = e.capital + e.bet * (pc.at(stop) - p0);
      cc.min_value = rmin(cc.min_value, at_stop);
    }
    Rat vend = e.capital + e.bet * (w(end) - p0);
    Rat lend = e.capital + e.bet * (w.left_limit(end) - p0);
    note(end, vend, lend);
  }
  return cc;
}

inline SimpleStrategy never_bets() {
  return {"never-bets", [](const Path&, const EventState&) { return Decision{0, false, 1, Rat(0), {}}; },
          Grade::strongly_predictable, Rat(0)};
}

inline SimpleStrategy buy_and_hold(const Rat& h = 1) {
  return {"buy-and-hold", [h](const Path&, const EventState&) { return Decision{h, false, 1, Rat(0), {}}; },
          Grade::strongly_predictable, abs(h)};
}

struct ScheduledBet {
  Rat time;
  Rat bet;
  bool relative = false;
};

/// Bets fixed in advance: schedule[i].bet is held on [time_i, time_{i+1}).
inline SimpleStrategy fixed_schedule(std::vector<ScheduledBet> schedule, std::string name = "schedule") {
  std::stable_sort(schedule.begin(), schedule.end(), [](const auto& a, const auto& b) { return a.time < b.time; });
  return {std::move(name),
          [schedule](const Path&, const EventState& st) {
            // memo: index of the next schedule entry not yet reached
            std::size_t i = st.memo.has_value() ? std::any_cast<std::size_t>(st.memo) : 0;
            Decision d;
            d.determined_at = Rat(0);
            if (i < schedule.size() && schedule[i].time == st.tau) {
              d.bet = schedule[i].bet;
              d.relative = schedule[i].relative;
              ++i;
            }
            d.next_time = i < schedule.size() ? schedule[i].time : Rat(1);
            d.memo = i;
            return d;
          },
          Grade::strongly_predictable, std::nullopt};
}

/// All-in with leverage H at time 0, held to 1.
inline SimpleStrategy leveraged_all_in(const Rat& H) {
  return {"all-in-leverage", [H](const Path&, const EventState&) { return Decision{H, true, 1, Rat(0), {}}; },
          Grade::strongly_predictable, std::nullopt};
}

/// Bets, at time `at`, the price at the later time `peek`.
inline SimpleStrategy future_reader(const Rat& at = Rat(1, 2), const Rat& peek = Rat(3, 4)) {
  return {"future-reader",
          [at, peek](const Path& w, const EventState& st) {
            if (st.tau < at) return Decision{0, false, at, Rat(0), {}};
            return Decision{w(peek), false, 1, at, {}};
          },
          Grade::plain, std::nullopt};
}

/// Multiplies every absolute bet by lambda; relative bets pass through.
inline SimpleStrategy scaled(const SimpleStrategy& s, const Rat& lambda) {
  SimpleStrategy out = s;
  out.name = s.name + "*" + to_string(lambda);
  out.next = [inner = s.next, lambda](const Path& w, const EventState& st) {
    EventState in{st.k, st.tau, st.capital / lambda, st.memo};
    Decision d = inner(w, in);
    if (!d.relative) d.bet *= lambda;
    return d;
  };
  if (s.bet_bound) out.bet_bound = *s.bet_bound * abs(lambda);
  return out;
}

// ---------------------------------------------------------------------------
// Mixtures

struct MixtureComponent {
  SimpleStrategy strategy;
  Rat initial;
  long index = 0;
};

struct Mixture {
  std::string name;
  std::vector<MixtureComponent> components;
  Rat tail_budget = 0;
  long truncation() const { return static_cast<long>(components.size()); }
  Rat initial_total() const {
    Rat s = 0;
    for (const auto& c : components) s += c.initial;
    return s;
  }
};

struct MixtureValue {
  Rat total;
  std::vector<Rat> parts;
  Rat tail_budget;
};

inline MixtureValue evaluate_mixture(const Mixture& m, const Path& w, const Rat& t) {
  MixtureValue out{0, {}, m.tail_budget};
  for (const auto& c : m.components) {
    Trace tr = run_strategy(c.strategy, c.initial, w);
    CapitalCurve cc = capital_curve(tr, w, t);
    if (cc.min_value < 0)
      throw InvariantViolation("mixture component '" + c.strategy.name + "' goes negative (" +
                               to_string(cc.min_value) + ")");
    Rat v = capital_at(tr, w, t);
    out.parts.push_back(v);
    out.total += v;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Planned strategies: a schedule computed on a reference path, followed only
// while the realized path keeps agreeing with that reference.

struct PlanStep {
  Rat time;
  Rat H;                             // relative bet held from this step on
  std::optional<Rat> determined_at;  // defaults to the step time
  Rat guard;                         // agreement with the reference is checked on [0, guard]
};

struct Plan {
  Path reference;
  std::vector<PlanStep> steps;  // nondecreasing times, held until the next step or 1
};

struct PlannedStrategy {
  std::string name;
  // Returns no plan when the strategy never bets on this path.
  std::function<std::optional<Plan>(const Path&)> plan;
  bool shifted = false;
};

namespace detail {

inline Decision planned_decision(const std::shared_ptr<const std::optional<Plan>>& p, const Path& w,
                                 const EventState& st) {
  Decision d;
  d.memo = p;
  const auto& plan = *p;
  if (!plan) return d;
  const auto& steps = plan->steps;
  // Step index to emit at this call: k-1 (call 1 is the idle start).
  std::size_t idx = static_cast<std::size_t>(st.k - 1);
  if (st.k >= 2) {
    const PlanStep& cur = steps[idx - 1];
    d.bet = cur.H;
    d.relative = true;
    d.determined_at = cur.determined_at ? *cur.determined_at : cur.time;
  } else {
    d.determined_at = Rat(0);
  }
  if (idx < steps.size() && prefix_equal(w, plan->reference, steps[idx].guard, true)) {
    d.next_time = steps[idx].time;
  } else {
    d.next_time = 1;
  }
  if (d.next_time < st.tau) throw InvariantViolation("plan times decrease");
  return d;
}

}  // namespace detail

inline SimpleStrategy realize(const PlannedStrategy& ps) {
  SimpleStrategy s;
  s.name = ps.name;
  s.claimed_grade = ps.shifted ? Grade::strongly_predictable : Grade::plain;
  s.next = [plan = ps.plan](const Path& w, const EventState& st) {
    std::shared_ptr<const std::optional<Plan>> p;
    if (st.memo.has_value()) p = std::any_cast<std::shared_ptr<const std::optional<Plan>>>(st.memo);
    else p = std::make_shared<const std::optional<Plan>>(plan(w));
    return detail::planned_decision(p, w, st);
  };
  return s;
}

/// First breakpoint of w in (t, hi], or hi when none can be isolated.
inline Rat next_change_after(const Path& w, const Rat& t, const Rat& hi) {
  Rat top = hi;
  for (int i = 0; i < 200; ++i) {
    try {
      auto bps = w.breakpoints_in(t, top);
      for (const auto& b : bps)
        if (b > t) return b;
      return top;
    } catch (const UnresolvedError&) {
      top = (t + top) / 2;
    }
  }
  return top;
}

/// Moves each step strictly inside the gap to the next step, to the midpoint of
/// the reference's constancy interval there; the agreement guard stays put.
inline PlannedStrategy strengthen_predictability(const PlannedStrategy& ps) {
  if (ps.shifted) return ps;
  PlannedStrategy out;
  out.name = ps.name + "-shifted";
  out.shifted = true;
  out.plan = [inner = ps.plan](const Path& w) -> std::optional<Plan> {
    auto p = inner(w);
    if (!p) return p;
    for (const auto& st : p->steps)
      if (st.H != 0 && st.H != 1) throw std::invalid_argument("shift needs relative bets in {0, 1}");
    Plan q = *p;
    for (std::size_t k = 0; k < p->steps.size(); ++k) {
      const Rat& tk = p->steps[k].time;
      Rat nxt = k + 1 < p->steps.size() ? p->steps[k + 1].time : Rat(1);
      q.steps[k].determined_at = tk;
      q.steps[k].guard = p->steps[k].guard;
      if (tk < nxt) {
        Rat edge = next_change_after(p->reference, tk, nxt);
        q.steps[k].time = (tk + edge) / 2;
      }
    }
    return q;
  };
  return out;
}

// ---------------------------------------------------------------------------
// Validation

enum class MarketKind { positive_jump, continuous };

struct Market {
  MarketKind kind = MarketKind::positive_jump;
  std::vector<Path> paths;
  std::vector<Rat> ratios{Rat(1, 100), Rat(1, 2), Rat(1), Rat(2), Rat(100)};
  std::vector<Rat> drifts{Rat(-100), Rat(-2), Rat(-1, 2), Rat(1, 2), Rat(2), Rat(100)};
  std::size_t max_probe_events = 24;
};

struct PositivityWitness {
  std::size_t path_index = 0;
  long event = 0;
  Rat deviation_time;
  std::string probe;  // "ratio 1/100", "ratio->0", "drift -2", "realized"
  Rat capital;
};

struct DeterminismWitness {
  std::size_t path_index = 0;
  long event = 0;
  Path first;
  Path second;
  Agreement agree;
  std::string what;
};

struct ValidationReport {
  bool positive = true;
  std::optional<PositivityWitness> positivity_witness;
  bool deterministic = true;
  std::optional<DeterminismWitness> determinism_witness;
  Grade grade = Grade::strongly_predictable;
  std::optional<DeterminismWitness> grade_witness;
  long events_checked = 0;
};

namespace detail {

inline Path deviate(const Market& m, const Path& w, const Rat& u, bool up) {
  if (m.kind == MarketKind::positive_jump) return w.scaled_from(u, up ? Rat(2) : Rat(1, 2));
  return w.drifted_from(u, up ? Rat(1) : Rat(-1));
}

inline std::vector<std::size_t> probe_indices(std::size_t n, std::size_t cap) {
  std::vector<std::size_t> out;
  if (n <= cap) {
    for (std::size_t i = 0; i < n; ++i) out.push_back(i);
    return out;
  }
  for (std::size_t j = 0; j < cap; ++j) out.push_back(j * (n - 1) / (cap - 1));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Compares events 0..k of two traces; relative bets when `relative`.
inline std::optional<std::string> events_differ(const Trace& a, const Trace& b, std::size_t k, bool relative) {
  for (std::size_t j = 0; j <= k; ++j) {
    if (j >= a.events.size() || j >= b.events.size()) return "event count";
    const auto& x = a.events[j];
    const auto& y = b.events[j];
    if (x.tau != y.tau) return "stopping time " + std::to_string(j + 1);
    if (relative) {
      if (x.H != y.H) return "relative bet " + std::to_string(j + 1);
    } else if (x.bet != y.bet) {
      return "bet " + std::to_string(j + 1);
    }
  }
  return std::nullopt;
}

inline bool check_curve(const Trace& tr, const Path& w, Rat& out_min) {
  out_min = capital_curve(tr, w).min_value;
  return out_min >= 0;
}

}  // namespace detail

inline ValidationReport validate_strategy(const SimpleStrategy& s, const Market& market, const Rat& c) {
  ValidationReport rep;
  bool predictable_ok = true, strong_ok = true;
  auto fail_pos = [&](PositivityWitness w) {
    if (rep.positive) {
      rep.positive = false;
      rep.positivity_witness = std::move(w);
    }
  };
  for (std::size_t pi = 0; pi < market.paths.size(); ++pi) {
    const Path& w = market.paths[pi];
    Trace tr = run_strategy(s, c, w);
    Rat mn;
    if (!detail::check_curve(tr, w, mn)) fail_pos({pi, 0, 0, "realized", mn});
    auto idx = detail::probe_indices(tr.events.size(), market.max_probe_events);
    for (std::size_t i : idx) {
      const Event& e = tr.events[i];
      ++rep.events_checked;
      if (e.tau >= 1) continue;
      Rat gap_end = e.next_time > e.tau ? e.next_time : Rat(1);
      Rat u_after = e.tau + (gap_end - e.tau) / 4;

      // Positivity: one-step probes and full deviated runs.
      if (market.kind == MarketKind::positive_jump) {
        Rat price = w(e.tau);
        for (const auto& r : market.ratios) {
          Rat v = e.capital + e.bet * (r - 1) * price;
          if (v < 0) fail_pos({pi, e.k, e.tau, "ratio " + to_string(r), v});
        }
        if (price > 0) {
          if (e.capital - e.bet * price < 0) fail_pos({pi, e.k, e.tau, "ratio->0", e.capital - e.bet * price});
          if (e.bet < 0) fail_pos({pi, e.k, e.tau, "ratio->inf", e.bet});
        }
        if (e.bet != 0 && e.next_time > e.tau) {
          for (const auto& r : market.ratios) {
            if (r == 1) continue;
            Path dev = w.scaled_from(u_after, r);
            Trace dt = run_strategy(s, c, dev);
            if (!detail::check_curve(dt, dev, mn)) fail_pos({pi, e.k, u_after, "ratio " + to_string(r), mn});
          }
        }
      } else if (e.bet != 0 && e.next_time > e.tau) {
        for (const auto& rho : market.drifts) {
          Path dev = w.drifted_from(u_after, rho);
          Trace dt = run_strategy(s, c, dev);
          if (!detail::check_curve(dt, dev, mn)) fail_pos({pi, e.k, u_after, "drift " + to_string(rho), mn});
        }
      }

      // Determinism, then the two predictability grades.
      for (bool up : {true, false}) {
        if (rep.deterministic) {
          Path dev = detail::deviate(market, w, u_after, up);
          Trace dt = run_strategy(s, c, dev);
          if (auto why = detail::events_differ(tr, dt, i, false)) {
            rep.deterministic = false;
            rep.determinism_witness = DeterminismWitness{pi, e.k, w, dev, agreement_time(w, dev), *why};
          }
        }
        if (predictable_ok) {
          Path dev = detail::deviate(market, w, e.tau, up);
          Trace dt = run_strategy(s, c, dev);
          if (auto why = detail::events_differ(tr, dt, i, true)) {
            predictable_ok = false;
            if (!rep.grade_witness)
              rep.grade_witness = DeterminismWitness{pi, e.k, w, dev, agreement_time(w, dev), *why};
          }
        }
        if (strong_ok) {
          Rat u = 0;
          if (e.tau > 0) {
            Rat from = 0;
            if (e.determined_at && *e.determined_at < e.tau) {
              from = *e.determined_at;
            } else {
              for (std::size_t j = i; j-- > 0;)
                if (tr.events[j].tau < e.tau) {
                  from = tr.events[j].tau;
                  break;
                }
            }
            u = (from + e.tau) / 2;
          }
          Path dev = detail::deviate(market, w, u, up);
          Trace dt = run_strategy(s, c, dev);
          if (auto why = detail::events_differ(tr, dt, i, true)) {
            strong_ok = false;
            if (predictable_ok && !rep.grade_witness)
              rep.grade_witness = DeterminismWitness{pi, e.k, w, dev, agreement_time(w, dev), *why};
          }
        }
      }
    }
  }
  if (!rep.deterministic || !predictable_ok) {
    rep.grade = Grade::plain;
  } else if (!strong_ok) {
    rep.grade = Grade::predictable;
  }
  return rep;
}

}  // namespace gtp
