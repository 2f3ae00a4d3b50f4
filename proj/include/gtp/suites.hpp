#pragma once

// Seeded property suites over the built-in constructions. Each returns the
// number of checks made and a description of every failed one.

#include <random>
#include <set>
#include <string>
#include <vector>

#include "gtp/families.hpp"
#include "gtp/upprob.hpp"
#include "gtp/variation.hpp"

namespace gtp {

struct SuiteResult {
  std::string name;
  long checks = 0;
  std::vector<std::string> failures;

  bool pass() const { return failures.empty(); }
  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) failures.push_back(what);
  }
};

// ---------------------------------------------------------------------------
// Random instances

/// Positive step path on the 1/64 grid with at most `max_jumps` jumps whose
/// ratios come from {1/2, 2/3, 3/2, 2}.
inline Path random_ratio_path(std::mt19937_64& rng, int max_jumps = 6) {
  static const Rat menu[] = {Rat(1, 2), Rat(2, 3), Rat(3, 2), Rat(2)};
  std::uniform_int_distribution<int> nj(0, max_jumps), pick(0, 3), pos(1, 63);
  std::set<int> cuts;
  for (int i = nj(rng); i > 0; --i) cuts.insert(pos(rng));
  Rat v = 1;
  std::vector<std::pair<Rat, Rat>> pts{{Rat(0), v}};
  for (int c : cuts) {
    v *= menu[pick(rng)];
    pts.emplace_back(Rat(c, 64), v);
  }
  return Path::step(pts);
}

/// Step path on the 1/den grid with integer values in [1, max_value];
/// repeated values merge, so there are at most `max_jumps` jumps.
inline Path random_positive_step(std::mt19937_64& rng, int den = 16, int max_jumps = 6, int max_value = 4) {
  std::uniform_int_distribution<int> nj(0, max_jumps), pos(1, den - 1), val(1, max_value);
  std::set<int> cuts;
  for (int i = nj(rng); i > 0; --i) cuts.insert(pos(rng));
  std::vector<std::pair<Rat, Rat>> pts{{Rat(0), Rat(val(rng))}};
  for (int c : cuts) pts.emplace_back(Rat(c, den), Rat(val(rng)));
  return Path::step(pts);
}

// ---------------------------------------------------------------------------
// Upper probability sweep

struct UpprobRow {
  long index = 0;
  Path path;
  UpProb formula;
  DpResult dp;
  bool match = false;
  bool consistent = false;
};

inline UpprobRow upprob_row(const Path& w, long index = 0) {
  UpprobRow r;
  r.index = index;
  r.path = w;
  r.formula = upprob_singleton(w);
  r.dp = dp_oracle_upprob(LatticeGame::from_step_path(w));
  r.match = r.formula.exact() && r.dp.value == r.formula.hi;
  r.consistent = formula_consistency(w).equal();
  return r;
}

inline std::vector<UpprobRow> upprob_sweep(std::uint64_t seed, long count) {
  std::mt19937_64 rng(seed);
  std::vector<UpprobRow> rows;
  for (long i = 0; i < count; ++i) rows.push_back(upprob_row(random_ratio_path(rng), i));
  return rows;
}

// ---------------------------------------------------------------------------
// Variation

/// Suprema over every partition drawn from {0, breakpoints, 1} of a step path.
struct PartitionSup {
  Rat total, positive;
  Rat log_total_product = 1, log_positive_product = 1;
};

inline PartitionSup partition_supremum(const Path& p) {
  if (p.has_gadgets() || !p.is_step_base()) throw std::invalid_argument("partition enumeration needs a step path");
  std::vector<Rat> pts{Rat(0)};
  for (const auto& s : p.segments())
    if (s.start > 0) pts.push_back(s.start);
  if (pts.back() != 1) pts.push_back(Rat(1));
  if (pts.size() > 12) throw std::invalid_argument("too many breakpoints to enumerate");
  PartitionSup best;
  const unsigned n = static_cast<unsigned>(pts.size());
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    Rat tot = 0, pos = 0, lt = 1, lp = 1;
    std::optional<Rat> prev;
    for (unsigned i = 0; i < n; ++i) {
      if (!(mask & (1u << i))) continue;
      if (prev) {
        Rat x = p(*prev), y = p(pts[i]);
        tot += abs(y - x);
        if (y > x) pos += y - x;
        if (x > 0 && y > 0) {
          Rat q = y / x;
          lt *= q > 1 ? q : Rat(1 / q);
          if (q > 1) lp *= q;
        }
      }
      prev = pts[i];
    }
    best.total = rmax(best.total, tot);
    best.positive = rmax(best.positive, pos);
    best.log_total_product = rmax(best.log_total_product, lt);
    best.log_positive_product = rmax(best.log_positive_product, lp);
  }
  return best;
}

inline SuiteResult suite_variation_partitions(std::uint64_t seed, long count = 50) {
  SuiteResult r{"variation-partitions", 0, {}};
  std::mt19937_64 rng(seed);
  for (long i = 0; i < count; ++i) {
    Path p = random_positive_step(rng);
    PartitionSup b = partition_supremum(p);
    std::string id = "path " + std::to_string(i);
    r.expect(total_variation(p).value == b.total, id + ": total variation");
    r.expect(positive_variation(p).value == b.positive, id + ": positive variation");
    r.expect(log_total_variation(p).value.product() == b.log_total_product, id + ": log total variation");
    r.expect(log_positive_variation(p).value.product() == b.log_positive_product, id + ": log positive variation");
  }
  return r;
}

/// var = var+ + var- on every built-in path, every gadget kind, and random
/// step paths with gadgets attached away from their breakpoints.
inline SuiteResult suite_decomposition(std::uint64_t seed) {
  SuiteResult r{"decomposition", 0, {}};
  for (const auto& nf : builtin_families()) {
    r.expect(decomposition_check(nf.target), nf.name + " target");
    for (const auto& b : nf.family.blocks()) {
      if (auto* f = std::get_if<FiniteBlock>(&b)) {
        for (std::size_t i = 0; i < f->paths.size(); ++i)
          r.expect(decomposition_check(f->paths[i]), nf.name + " " + f->labels[i]);
      } else {
        const auto& o = std::get<OmegaBlock>(b);
        for (long m = 1; m <= 4; ++m) r.expect(decomposition_check(o.member(m)), nf.name + " " + o.label(m));
      }
    }
  }
  for (GadgetFamily fam : {GadgetFamily::telescoping_harmonic, GadgetFamily::geometric_convergent})
    for (Side side : {Side::left, Side::right})
      for (const Rat& a : {Rat(1, 4), Rat(1, 2), Rat(3, 4)}) {
        Path g = Path::with_gadgets(Path::constant(1), {Gadget{a, side, fam, 2}});
        r.expect(decomposition_check(g), "gadget at " + to_string(a));
      }
  std::mt19937_64 rng(seed);
  std::vector<Gadget> gs{Gadget{Rat(1, 8), Side::right, GadgetFamily::telescoping_harmonic, 2},
                         Gadget{Rat(7, 8), Side::left, GadgetFamily::geometric_convergent, 2}};
  for (int i = 0; i < 30; ++i) {
    Path p = random_positive_step(rng, 16, 5, 3);
    r.expect(decomposition_check(p), "random step " + std::to_string(i));
    bool clash = false;
    for (const auto& s : p.segments())
      for (const auto& g : gs) clash = clash || g.is_step_time(s.start);
    if (!clash) r.expect(decomposition_check(Path::with_gadgets(p, gs)), "random gadget path " + std::to_string(i));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Prediction suites

inline SuiteResult suite_lemma5() {
  SuiteResult r{"lemma5", 0, {}};
  NamedFamily nf = lemma5_family();
  auto [W, F] = failure_sets(nf.family, nf.target);
  r.expect(W.finite() && W.sample() == std::vector<Rat>{Rat(1, 4), Rat(3, 4), Rat(1)}, "W = " + W.describe());
  Rat h(1, 2);
  auto before = predict(nf.family, nf.target, h, PredictMode::open);
  auto at = predict(nf.family, nf.target, h, PredictMode::closed);
  r.expect(before.index != at.index, "prediction changes at 1/2");
  r.expect(!W.contains(h) && F.contains(h), "1/2 lies in F but not in W");
  return r;
}

inline const std::vector<std::string>& success_class_tags() {
  static const std::vector<std::string> tags{"(-,0,+)", "(-,0)", "(0,+)", "(0)", "(-,+)", "(-)", "(+)", "()"};
  return tags;
}

/// The witness family for each class puts c in that class and no other
/// sampled time of (0,1) in it (except for the full class, which is generic).
inline SuiteResult suite_lemma6(std::uint64_t seed, int samples = 5) {
  SuiteResult r{"lemma6", 0, {}};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(1, 98);
  for (int k = 0; k < samples; ++k) {
    Rat c(num(rng), 99);
    for (const auto& tag : success_class_tags()) {
      NamedFamily nf = lemma6_family(c, tag);
      OckhamAnalysis a(nf.family, nf.target);
      r.expect(a.classify(c).tag() == tag, tag + " at c=" + to_string(c) + " got " + a.classify(c).tag());
      if (tag == "(-,0,+)") continue;
      for (const auto& ct : classify_success(nf.family, nf.target)) {
        if (ct.time == 0 || ct.time == 1 || ct.time == c) continue;
        r.expect(ct.cls.tag() != tag, tag + " also at " + to_string(ct.time) + " (c=" + to_string(c) + ")");
      }
    }
  }
  for (const char* tag : {"(+)", "()"}) {
    NamedFamily nf = lemma6_zero_family(tag);
    r.expect(OckhamAnalysis(nf.family, nf.target).classify(0).tag() == tag, std::string(tag) + " at 0");
  }
  return r;
}

inline SuiteResult suite_lemma7(std::uint64_t seed, int trials = 10) {
  SuiteResult r{"lemma7", 0, {}};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> size(0, 7), num(1, 63);
  for (int i = 0; i < trials; ++i) {
    std::set<Rat> w0{Rat(1)};
    for (int k = size(rng); k > 0; --k) w0.insert(Rat(num(rng), 64));
    NamedFamily nf = lemma7_family({w0.begin(), w0.end()});
    auto [W, F] = failure_sets(nf.family, nf.target);
    r.expect(W.finite() && W.sample() == std::vector<Rat>(w0.begin(), w0.end()), "trial " + std::to_string(i) +
                                                                                       ": W = " + W.describe());
  }
  return r;
}

/// W within F, 1 in W, 0 and 1 in F, every non-maximal element of F has a
/// successor, and the class of a time agrees with membership in W and F.
inline SuiteResult suite_structure() {
  SuiteResult r{"structure", 0, {}};
  for (const auto& nf : builtin_families()) {
    OckhamAnalysis a(nf.family, nf.target);
    TimeSet W = a.W(), F = a.F();
    r.expect(W.contains(1), nf.name + ": 1 in W");
    r.expect(F.contains(0) && F.contains(1), nf.name + ": 0, 1 in F");
    for (const auto& w : W.sample(8)) r.expect(F.contains(w), nf.name + ": " + to_string(w) + " in F");
    for (const auto& x : F.sample(8)) {
      if (x == 1) continue;
      auto next = F.successor(x);
      r.expect(next && *next > x, nf.name + ": right-isolated at " + to_string(x));
    }
  }
  return r;
}

/// Closed predictions are constant on each gap of F.
inline SuiteResult suite_lemma4(int per_gap = 5) {
  SuiteResult r{"lemma4", 0, {}};
  for (const auto& nf : builtin_families()) {
    auto [W, F] = failure_sets(nf.family, nf.target);
    for (const auto& x : F.sample(6)) {
      auto next = F.successor(x);
      if (!next) continue;
      Rat gap = *next - x;
      auto first = predict(nf.family, nf.target, x + gap / (per_gap + 1), PredictMode::closed).index;
      for (int k = 2; k <= per_gap; ++k) {
        auto idx = predict(nf.family, nf.target, x + gap * Rat(k, per_gap + 1), PredictMode::closed).index;
        r.expect(idx == first, nf.name + ": gap after " + to_string(x));
      }
    }
  }
  return r;
}

}  // namespace gtp
