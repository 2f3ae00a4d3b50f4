#pragma once

// The sign-sequence paths w_xi, the capital of prefix-determined strategies
// on them, and the exact average over all sign sequences.

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "gtp/strategy.hpp"

namespace gtp {

struct AdversarySpec {
  Rat t = 1;             // accumulation target
  std::vector<int> xi;   // signs, xi[i-1] is xi_i
  long depth() const { return static_cast<long>(xi.size()); }
};

inline Rat adversary_time(const Rat& t, long i) { return t * (1 - pow2(-i)); }

struct AdversaryReport {
  Path path;                      // constant after t_I
  std::vector<Rat> values;        // w(t_0), ..., w(t_I)
  std::vector<Rat> partial_sums;  // S_i = sum_{j<=i} xi_j / (j+1)
  Rat second_order;               // sum 1/(i+1)^2, bounds |log w(t_I) - S_I|
  bool extendable_consistent = true;
};

inline AdversaryReport adversary_path(const AdversarySpec& spec) {
  if (spec.depth() < 1) throw std::invalid_argument("adversary depth must be >= 1");
  if (!(spec.t > 0 && spec.t <= 1)) throw std::invalid_argument("adversary target must lie in (0,1]");
  AdversaryReport rep;
  rep.values.push_back(1);
  rep.partial_sums.push_back(0);
  std::vector<std::pair<Rat, Rat>> pts{{Rat(0), Rat(1)}};
  Rat S = 0, v = 1;
  rep.second_order = 0;
  for (long i = 1; i <= spec.depth(); ++i) {
    int x = spec.xi[i - 1];
    if (x != 1 && x != -1) throw std::invalid_argument("signs must be +1 or -1");
    v *= 1 + Rat(x, i + 1);
    S += Rat(x, i + 1);
    rep.second_order += Rat(1, (i + 1) * (i + 1));
    rep.values.push_back(v);
    rep.partial_sums.push_back(S);
    if (abs(S) > 1) rep.extendable_consistent = false;
    pts.emplace_back(adversary_time(spec.t, i), v);
  }
  rep.path = Path::step(pts);
  return rep;
}

/// Relative bet on [t_{i-1}, t_i) from the signs xi_1..xi_{i-1}.
using PrefixStrategy = std::function<Rat(const std::vector<int>& prefix)>;

struct NamedPrefixStrategy {
  std::string name;
  PrefixStrategy alpha;
};

inline NamedPrefixStrategy prefix_all_in() {
  return {"all-in", [](const std::vector<int>&) { return Rat(1); }};
}
inline NamedPrefixStrategy prefix_cash() {
  return {"cash", [](const std::vector<int>&) { return Rat(0); }};
}
/// (1 + xi_{i-1}) / 2, and 1/2 before the first sign.
inline NamedPrefixStrategy prefix_momentum() {
  return {"momentum", [](const std::vector<int>& p) { return p.empty() ? Rat(1, 2) : Rat(1 + p.back(), 2); }};
}

inline NamedPrefixStrategy prefix_strategy_by_name(const std::string& name) {
  if (name == "all-in") return prefix_all_in();
  if (name == "cash") return prefix_cash();
  if (name == "momentum") return prefix_momentum();
  throw std::invalid_argument("unknown adversary strategy \"" + name + "\" (all-in, cash, momentum)");
}

/// A random valid strategy: bets in [0,1] read from a seeded table keyed by
/// the step mod 3, the last k signs, and the parity of the up-move count.
inline NamedPrefixStrategy random_prefix_strategy(std::mt19937_64& rng) {
  int k = std::uniform_int_distribution<int>(0, 3)(rng);
  std::uint64_t seed = rng();
  auto fn = [k, seed](const std::vector<int>& p) {
    static const Rat menu[] = {Rat(0), Rat(1, 4), Rat(1, 3), Rat(1, 2), Rat(2, 3), Rat(1)};
    std::uint64_t h = seed ^ 1469598103934665603ULL;  // FNV-1a over the key
    auto mix = [&h](std::uint64_t x) { h = (h ^ x) * 1099511628211ULL; };
    mix(p.size() % 3);
    for (int j = 0; j < k && j < static_cast<int>(p.size()); ++j) mix(p[p.size() - 1 - j] > 0 ? 2 : 3);
    long ups = 0;
    for (int x : p) ups += x > 0;
    mix(4 + ups % 2);
    return menu[(h >> 17) % 6];
  };
  return {"random-k" + std::to_string(k), fn};
}

inline void check_alpha(const Rat& a) {
  if (a < 0 || a > 1) throw std::invalid_argument("relative bet " + to_string(a) + " outside [0,1]");
}

/// Average of K_I over all 2^I sign sequences, by depth-first recursion.
inline Rat exact_expected_capital(const PrefixStrategy& alpha, long I, const Rat& K0 = 1) {
  if (I < 0 || I > 24) throw std::invalid_argument("depth must be in [0, 24]");
  std::vector<int> prefix;
  std::function<Rat(long, const Rat&)> go = [&](long i, const Rat& K) -> Rat {
    if (i > I) return K;
    Rat a = alpha(prefix);
    check_alpha(a);
    Rat step(1, i + 1);
    prefix.push_back(1);
    Rat up = go(i + 1, K * (1 + a * step));
    prefix.back() = -1;
    Rat down = go(i + 1, K * (1 - a * step));
    prefix.pop_back();
    return (up + down) / 2;
  };
  return go(1, K0);
}

/// The same strategy as an event program that reads the signs off the path.
inline SimpleStrategy prefix_strategy_on_paths(const NamedPrefixStrategy& ps, const Rat& t, long I) {
  SimpleStrategy s;
  s.name = ps.name;
  s.claimed_grade = Grade::predictable;
  s.next = [alpha = ps.alpha, t, I](const Path& w, const EventState& st) {
    Decision d;
    long i = st.k;  // call i sits at t_{i-1}
    if (i > I) return d;
    std::vector<int> prefix;
    for (long j = 1; j < i; ++j) prefix.push_back(w(adversary_time(t, j)) > w(adversary_time(t, j - 1)) ? 1 : -1);
    d.bet = alpha(prefix);
    check_alpha(d.bet);
    d.relative = true;
    d.next_time = adversary_time(t, i);
    d.determined_at = adversary_time(t, i - 1);
    return d;
  };
  return s;
}

/// Average over all sign sequences with each path built explicitly and the
/// strategy run through the event engine; checks prefix determination.
inline Rat exact_expected_capital_engine(const SimpleStrategy& s, const Rat& t, long I, const Rat& K0 = 1) {
  if (I < 1 || I > 20) throw std::invalid_argument("depth must be in [1, 20]");
  std::map<std::vector<int>, Rat> seen;  // prefix -> relative bet at that node
  Rat sum = 0;
  for (unsigned long mask = 0; mask < (1UL << I); ++mask) {
    AdversarySpec spec{t, {}};
    for (long i = 0; i < I; ++i) spec.xi.push_back((mask >> (I - 1 - i)) & 1 ? -1 : 1);
    auto rep = adversary_path(spec);
    Trace tr = run_strategy(s, K0, rep.path);
    for (const auto& e : tr.events) {
      long i = e.k;
      if (i > I) break;
      Rat H = e.H ? *e.H : Rat(0);
      check_alpha(H);
      std::vector<int> prefix(spec.xi.begin(), spec.xi.begin() + (i - 1));
      auto [it, fresh] = seen.emplace(prefix, H);
      if (!fresh && it->second != H)
        throw std::invalid_argument("strategy is not determined by the sign prefix at step " + std::to_string(i));
    }
    sum += capital_at(tr, rep.path, adversary_time(t, I));
  }
  return sum / Rat(static_cast<long>(1UL << I));
}

}  // namespace gtp
