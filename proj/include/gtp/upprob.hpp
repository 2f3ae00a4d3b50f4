#pragma once

// Upper probability of a single path, the all-in superhedge that attains
// it, a backward-induction oracle on a lattice market, and the three-way
// sign verdict.

#include <string>
#include <vector>

#include "gtp/paths.hpp"
#include "gtp/strategy.hpp"
#include "gtp/variation.hpp"

namespace gtp {

/// exp(-var+(log w)). `lo == hi` when exact; a convergent gadget tail widens
/// the bracket; `null` when var+ is infinite.
struct UpProb {
  bool null = false;
  Rat lo, hi;
  LogSum var_plus;  // exact part of var+(log w)
  std::string certificate;
  bool exact() const { return !null && lo == hi; }
  double as_double() const { return null ? 0.0 : to_double(hi); }
};

inline UpProb upprob_singleton(const Path& w) {
  if (classify_zero_behavior(w) != ZeroClass::A) throw std::invalid_argument("upper probability needs a positive path");
  auto v = log_positive_variation(w);
  UpProb out;
  out.certificate = v.certificate;
  if (v.is_infinite()) {
    out.null = true;
    out.lo = out.hi = 0;
    return out;
  }
  out.var_plus = v.value;
  out.hi = 1 / v.value.product();
  out.lo = v.kind == VarKind::convergent ? out.hi / v.tail.product() : out.hi;
  return out;
}

/// The symmetric formula sqrt((w(0)/w(1)) exp(-var(log w))), squared and
/// compared exactly against the square of exp(-var+(log w)).
struct FormulaCheck {
  Rat left;   // exp(-2 var+)
  Rat right;  // (w(0)/w(1)) exp(-var)
  bool equal() const { return left == right; }
};

inline FormulaCheck formula_consistency(const Path& w) {
  auto pos = log_positive_variation(w);
  auto tot = log_total_variation(w);
  if (!pos.is_exact() || !tot.is_exact()) throw UnresolvedError("formula check needs exact finite variations");
  Rat p = pos.value.product();
  return {1 / (p * p), w(0) / (w(1) * tot.value.product())};
}

inline void require_positive_step(const Path& w) {
  if (w.has_gadgets() || !w.is_step_base()) throw std::invalid_argument("expected a finite step path");
  for (const auto& s : w.segments())
    if (s.value <= 0) throw std::invalid_argument("expected a positive path");
}

/// All-in on [b_{i-1}, b_i) exactly when the jump at b_i is upward.
inline SimpleStrategy superhedge_singleton(const Path& w) {
  require_positive_step(w);
  const auto& segs = w.segments();
  std::vector<ScheduledBet> sched;
  for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
    bool up = segs[i + 1].value > segs[i].value;
    sched.push_back({segs[i].start, up ? Rat(1) : Rat(0), true});
  }
  if (segs.size() > 1) sched.push_back({segs.back().start, Rat(0), true});
  SimpleStrategy s = fixed_schedule(std::move(sched), "superhedge");
  return s;
}

// ---------------------------------------------------------------------------
// Lattice oracle

struct LatticeGame {
  Rat start = 1;
  std::vector<Rat> ratios;  // on-path ratio of each step
  std::vector<Rat> probes{Rat(1, 200), Rat(1, 2), Rat(2), Rat(200)};

  static LatticeGame from_step_path(const Path& w) {
    require_positive_step(w);
    LatticeGame g;
    const auto& segs = w.segments();
    g.start = segs.front().value;
    for (std::size_t i = 1; i < segs.size(); ++i) g.ratios.push_back(segs[i].value / segs[i - 1].value);
    return g;
  }

  void validate() const {
    if (start <= 0) throw std::invalid_argument("lattice start price must be positive");
    for (const auto& r : ratios)
      if (r <= 0) throw std::invalid_argument("lattice ratios must be positive");
    if (probes.empty()) throw std::invalid_argument("lattice probe set is empty");
    bool small = false, large = false;
    for (const auto& p : probes) {
      if (p <= 0) throw std::invalid_argument("probe ratios must be positive");
      small = small || p < Rat(1, 100);
      large = large || p > 100;
    }
    if (!small || !large) throw std::invalid_argument("probe set needs a ratio below 1/100 and one above 100");
  }
};

struct DpResult {
  Rat value;
  std::vector<Rat> policy;  // optimal relative bet at each step
};

/// Smallest capital that reaches 1 on the on-path branch while staying
/// nonnegative against every probe ratio and the limiting rays 0 and
/// infinity at every step. Capital needed at node i is U_i = inf_H
/// U_{i+1} / (1 + H (r_i - 1)) over the feasible H; the objective is
/// monotone in H, so the infimum sits at an end of the feasible interval.
inline DpResult dp_oracle_upprob(const LatticeGame& g) {
  g.validate();
  // Feasible H: 1 + H (p - 1) >= 0 for each probe p, plus the rays
  // (p -> 0 forces H <= 1, p -> infinity forces H >= 0).
  Rat H_lo = 0, H_hi = 1;
  for (const auto& p : g.probes) {
    if (p < 1) H_hi = rmin(H_hi, 1 / (1 - p));
    if (p > 1) H_lo = rmax(H_lo, -1 / (p - 1));
  }
  DpResult res;
  res.policy.assign(g.ratios.size(), 0);
  Rat U = 1;
  for (std::size_t i = g.ratios.size(); i-- > 0;) {
    const Rat& r = g.ratios[i];
    Rat best;
    bool first = true;
    for (const Rat& H : {H_lo, H_hi}) {
      Rat growth = 1 + H * (r - 1);
      if (growth <= 0) continue;
      Rat need = U / growth;
      if (first || need < best) {
        best = need;
        res.policy[i] = H;
        first = false;
      }
    }
    if (first) throw InvariantViolation("no feasible bet in the lattice oracle");
    U = best;
  }
  res.value = U;
  return res;
}

// ---------------------------------------------------------------------------
// Sign verdict

enum class SignKind { positive, null, nontrivial };

inline const char* to_string(SignKind s) {
  switch (s) {
    case SignKind::positive: return "positive";
    case SignKind::null: return "null";
    case SignKind::nontrivial: return "nontrivial";
  }
  return "?";
}

struct SignVerdict {
  SignKind kind;
  UpProb value;              // for `positive`
  std::optional<Rat> when;   // inf I+ for `null`, inf I- for `nontrivial`
  std::string reason;
};

inline SignVerdict sign_oracle(const Path& w) {
  if (classify_zero_behavior(w) != ZeroClass::A) throw std::invalid_argument("sign verdict needs a positive path");
  auto tot = log_total_variation(w);
  if (tot.is_finite()) return {SignKind::positive, upprob_singleton(w), std::nullopt, "finite log variation"};
  auto sets = infinite_variation_sets(w);
  if (!sets.I_plus.empty())
    return {SignKind::null, {}, *sets.I_plus.begin(), "infinite right variation at " + to_string(*sets.I_plus.begin())};
  if (!sets.I_minus.empty())
    return {SignKind::nontrivial, {}, *sets.I_minus.begin(),
            "infinite left variation at " + to_string(*sets.I_minus.begin())};
  throw UnresolvedError("infinite log variation without a local witness");
}

}  // namespace gtp
