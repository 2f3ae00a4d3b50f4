#pragma once

#include <gtp/paths.hpp>

#include <random>

namespace gtp::testing {

inline Rat R(const char* s) { return parse_rat(s); }

inline Path step_path(std::initializer_list<std::pair<const char*, const char*>> pts) {
  std::vector<std::pair<Rat, Rat>> v;
  for (const auto& [t, x] : pts) v.emplace_back(R(t), R(x));
  return Path::step(v);
}

inline Path identity_path() { return Path::linear({{Rat(0), Rat(0)}, {Rat(1), Rat(1)}}); }

// Paths from the four-element counterexample family.
inline Path l5(int i) {
  Rat q(1, 4), h(1, 2), tq(3, 4);
  switch (i) {
    case 1: return Path::constant(1);
    case 2: return Path::piecewise({{0, 1, 0}, {q, 1, 1}});
    case 3: return Path::piecewise({{0, 1, 0}, {q, 1, 1}, {h, 1, 0}});
    default: return Path::piecewise({{0, 1, 0}, {q, 1, 1}, {h, 1, 0}, {tq, 1, 1}});
  }
}

// Random step path with positive values on a grid of 1/den.
inline Path random_step(std::mt19937_64& rng, int den = 16, int max_jumps = 5, int max_value = 4) {
  std::uniform_int_distribution<int> njumps(0, max_jumps), pos(1, den - 1), val(1, max_value);
  std::vector<int> cuts;
  int n = njumps(rng);
  for (int i = 0; i < n; ++i) cuts.push_back(pos(rng));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<std::pair<Rat, Rat>> pts{{Rat(0), Rat(val(rng))}};
  for (int c : cuts) pts.emplace_back(Rat(c, den), Rat(val(rng)));
  return Path::step(pts);
}

}  // namespace gtp::testing
