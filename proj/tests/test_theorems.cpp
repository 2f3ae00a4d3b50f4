#include <gtest/gtest.h>

#include <gtp/families.hpp>
#include <gtp/theorems.hpp>

#include <random>

#include "support.hpp"

using namespace gtp;
using gtp::testing::identity_path;
using gtp::testing::R;
using gtp::testing::step_path;

namespace {

Path udu() { return step_path({{"0", "1"}, {"1/3", "2"}, {"2/3", "1"}}); }

Path gadget_path(const Rat& acc, Side side, long j0 = 1) {
  return Path::with_gadgets(Path::constant(1), {Gadget{acc, side, GadgetFamily::telescoping_harmonic, j0}});
}

// Positive step path with up to 6 jumps whose ratios come from a fixed menu.
Path menu_path(std::mt19937_64& rng) {
  static const Rat menu[] = {Rat(1, 2), Rat(2, 3), Rat(3, 2), Rat(2)};
  std::uniform_int_distribution<int> nj(0, 6), pick(0, 3), pos(1, 63);
  std::vector<int> cuts;
  for (int i = nj(rng); i > 0; --i) cuts.push_back(pos(rng));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  Rat v = 1;
  std::vector<std::pair<Rat, Rat>> pts{{Rat(0), v}};
  for (int c : cuts) {
    v *= menu[pick(rng)];
    pts.emplace_back(Rat(c, 64), v);
  }
  return Path::step(pts);
}

// All crossings of every grid level on every piece, then the earliest valid one.
Rat grid_hit_oracle(const Path& w, const Rat& s, const Rat& b, long n, const std::optional<Rat>& avoid) {
  if (s >= b) return b;
  Rat scale = pow2(n);
  auto pcs = w.pieces(s, b);
  std::optional<Rat> best;
  auto offer = [&](const Rat& t, const Rat& x) {
    if (denominator(x * scale) != 1 || (avoid && x == *avoid)) return;
    if (!best || t < *best) best = t;
  };
  for (std::size_t i = 0; i < pcs.size(); ++i) {
    Rat end = i + 1 < pcs.size() ? pcs[i + 1].start : b;
    bool last = i + 1 == pcs.size();
    offer(pcs[i].start, pcs[i].value);
    if (pcs[i].slope == 0) continue;
    Rat x0 = pcs[i].value, x1 = pcs[i].at(end);
    Rat lo = rmin(x0, x1) * scale, hi = rmax(x0, x1) * scale;
    for (Int k = ceil_div(lo); Rat(k) <= hi; ++k) {
      Rat g = Rat(k) / scale;
      Rat t = pcs[i].start + (g - x0) / pcs[i].slope;
      if (t > pcs[i].start && (t < end || (last && t == end))) offer(t, g);
    }
  }
  return best ? *best : b;
}

// Product of up-ratios (j+1)/j of a right harmonic gadget at a over (lo, hi].
Rat harmonic_growth(const Rat& a, long j0, const Rat& lo, const Rat& hi) {
  Rat g = 1;
  for (long j = j0; a + pow2(-2 * j) > lo; ++j)
    if (a + pow2(-2 * j) <= hi) g *= Rat(j + 1, j);
  return g;
}

}  // namespace

// ---------------------------------------------------------------------------

TEST(UpProb, Examples) {
  auto u = upprob_singleton(udu());
  EXPECT_TRUE(u.exact());
  EXPECT_EQ(u.hi, R("1/2"));
  EXPECT_EQ(upprob_singleton(Path::constant(5)).hi, Rat(1));
  EXPECT_TRUE(upprob_singleton(gadget_path(R("1/4"), Side::right)).null);
}

TEST(UpProb, LatticeOracleExamples) {
  LatticeGame g;
  g.ratios = {Rat(2)};
  EXPECT_EQ(dp_oracle_upprob(g).value, R("1/2"));
  EXPECT_EQ(dp_oracle_upprob(g).policy[0], Rat(1));
  g.ratios = {R("1/2")};
  EXPECT_EQ(dp_oracle_upprob(g).value, Rat(1));
  EXPECT_EQ(dp_oracle_upprob(g).policy[0], Rat(0));
  g.ratios = {R("1/2"), Rat(2)};
  EXPECT_EQ(dp_oracle_upprob(g).value, R("1/2"));
  EXPECT_EQ(upprob_singleton(step_path({{"0", "1"}, {"1/3", "1/2"}, {"2/3", "1"}})).hi, R("1/2"));
  g.probes = {R("1/2"), Rat(2)};
  EXPECT_THROW(dp_oracle_upprob(g), std::invalid_argument);
}

TEST(UpProb, OracleAgreesWithFormulaOnRandomPaths) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 200; ++i) {
    Path w = menu_path(rng);
    auto dp = dp_oracle_upprob(LatticeGame::from_step_path(w));
    auto u = upprob_singleton(w);
    ASSERT_TRUE(u.exact());
    EXPECT_EQ(dp.value, u.hi) << i;
    auto fc = formula_consistency(w);
    EXPECT_TRUE(fc.equal()) << i << " " << fc.left << " vs " << fc.right;
  }
}

TEST(Superhedge, ReachesOneFromUpperProbability) {
  auto s = superhedge_singleton(udu());
  EXPECT_EQ(run_strategy(s, R("1/2"), udu()).final_capital, Rat(1));
  Path down = step_path({{"0", "1"}, {"1/2", "1/2"}});
  EXPECT_EQ(run_strategy(superhedge_singleton(down), 1, down).final_capital, Rat(1));
  // the price collapses by 1/100 just before the up-jump
  Path crash = udu().scaled_from(R("1/6"), R("1/100"));
  Rat K = run_strategy(s, R("1/2"), crash).final_capital;
  EXPECT_EQ(K, R("1/2") * R("2/100"));
}

TEST(Superhedge, OptimalAndPositive) {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 60; ++i) {
    Path w = menu_path(rng);
    Rat u = upprob_singleton(w).hi;
    auto s = superhedge_singleton(w);
    EXPECT_EQ(run_strategy(s, u, w).final_capital, Rat(1));
    EXPECT_LT(run_strategy(s, u * R("99/100"), w).final_capital, Rat(1));
    // the lattice policy bets the same fractions
    auto dp = dp_oracle_upprob(LatticeGame::from_step_path(w));
    Trace tr = run_strategy(s, u, w);
    for (std::size_t k = 0; k < dp.policy.size(); ++k) EXPECT_EQ(*tr.events[k].H, dp.policy[k]);
    Market m;
    m.paths = {w};
    auto rep = validate_strategy(s, m, u);
    EXPECT_TRUE(rep.positive);
    EXPECT_EQ(rep.grade, Grade::strongly_predictable);
  }
}

TEST(Sign, Taxonomy) {
  auto v = sign_oracle(udu());
  EXPECT_EQ(v.kind, SignKind::positive);
  EXPECT_EQ(v.value.hi, R("1/2"));
  auto n = sign_oracle(gadget_path(R("1/4"), Side::right));
  EXPECT_EQ(n.kind, SignKind::null);
  EXPECT_EQ(*n.when, R("1/4"));
  auto t = sign_oracle(gadget_path(R("1/2"), Side::left, 2));
  EXPECT_EQ(t.kind, SignKind::nontrivial);
  EXPECT_EQ(*t.when, R("1/2"));
}

// ---------------------------------------------------------------------------

TEST(Thm1, GridHitMatchesOracle) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> nn(1, 6), val(-8, 24), tt(1, 15);
  for (int i = 0; i < 300; ++i) {
    std::vector<std::pair<Rat, Rat>> nodes{{Rat(0), Rat(val(rng), 16)}};
    std::vector<int> cuts;
    for (int k = nn(rng); k > 0; --k) cuts.push_back(tt(rng));
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (int c : cuts) nodes.emplace_back(Rat(c, 16), Rat(val(rng), 16));
    nodes.emplace_back(Rat(1), Rat(val(rng), 16));
    Path w = Path::linear(nodes);
    long n = nn(rng) % 4 + 1;
    Rat s(tt(rng), 32), b = s + Rat(tt(rng), 32);
    if (b > 1) b = 1;
    EXPECT_EQ(grid_hit(w, s, b, n, std::nullopt), grid_hit_oracle(w, s, b, n, std::nullopt)) << i;
    Rat av = w(s);
    EXPECT_EQ(grid_hit(w, s, b, n, av), grid_hit_oracle(w, s, b, n, av)) << i;
  }
}

TEST(Thm1, IdentityComponentsMatchClosedForm) {
  auto fam = thm1_demo_family();
  Rat a = R("1/4"), b = R("3/4");
  for (long n = 1; n <= 12; ++n) {
    Rat K = evaluate_simple_capital(thm1_component(fam.family, a, b, n), 1, identity_path(), b);
    EXPECT_EQ(K, thm1_identity_capital(a, b, n)) << n;
    if (n >= 2) {
      EXPECT_EQ(K, 1 + pow2(n - 1)) << n;
    }
  }
  EXPECT_EQ(thm1_identity_capital(a, b, 4), Rat(9));
  EXPECT_EQ(thm1_identity_capital(a, b, 1), R("5/4"));
  // other windows, against the crossing count
  for (const auto& [x, y] : {std::pair{"1/3", "5/7"}, {"1/10", "9/10"}, {"2/5", "3/5"}})
    for (long n = 1; n <= 7; ++n)
      EXPECT_EQ(evaluate_simple_capital(thm1_component(fam.family, R(x), R(y), n), 1, identity_path(), R(y)),
                thm1_identity_capital(R(x), R(y), n))
          << x << " " << y << " " << n;
}

TEST(Thm1, MixtureAtZeroIndependentOfPath) {
  auto fam = thm1_demo_family();
  auto m = build_thm1_strategy(fam.family, R("1/4"), R("3/4"), 6);
  Rat total = m.initial_total();
  for (const Path& w : {identity_path(), Path::constant(2), Path::linear({{Rat(0), Rat(0)}, {Rat(1), Rat(-1)}})})
    EXPECT_EQ(evaluate_mixture(m, w, 0).total, total);
}

TEST(Thm1, StopsWhenPredictionFails) {
  auto fam = thm1_demo_family();
  Rat a = R("1/4"), b = R("3/4");
  // follows the identity up to 5/16, then flat
  Path w = Path::linear({{Rat(0), Rat(0)}, {R("5/16"), R("5/16")}, {Rat(1), R("5/16")}});
  auto s = thm1_component(fam.family, a, b, 4);
  Trace tr = run_strategy(s, 1, w);
  Rat at_dev = capital_at(tr, w, R("5/16"));
  EXPECT_EQ(at_dev, Rat(2));
  for (const char* t : {"3/8", "1/2", "3/4", "1"}) EXPECT_EQ(capital_at(tr, w, R(t)), at_dev);
  // never predicted: never bets
  EXPECT_EQ(run_strategy(s, 1, Path::constant(1)).final_capital, Rat(1));
}

TEST(Thm1, PositiveAgainstDriftProbes) {
  auto fam = thm1_demo_family();
  Market m;
  m.kind = MarketKind::continuous;
  m.paths = {identity_path(), Path::linear({{Rat(0), Rat(0)}, {R("3/8"), R("3/8")}, {Rat(1), R("-1/2")}})};
  for (long n = 1; n <= 4; ++n) {
    auto rep = validate_strategy(thm1_component(fam.family, R("1/4"), R("3/4"), n), m, 1);
    EXPECT_TRUE(rep.positive) << n;
    EXPECT_TRUE(rep.deterministic) << n;
  }
}

TEST(Thm1, ConstantPredictionKeepsCapital) {
  WellOrderedFamily fam;
  fam.add_finite({Path::constant(R("1/3"))}, {"flat"});
  auto s = thm1_component(fam, R("1/4"), R("3/4"), 5);
  EXPECT_EQ(run_strategy(s, 1, Path::constant(R("1/3"))).final_capital, Rat(1));
}

TEST(Thm1, PairWeightsAreDistinct) {
  std::set<long> seen;
  for (long q = 2; q <= 7; ++q)
    for (long p = 1; p < q; ++p)
      for (long q2 = 2; q2 <= 7; ++q2)
        for (long p2 = 1; p2 < q2; ++p2) {
          Rat a(p, q), b(p2, q2);
          if (denominator(a) != q || denominator(b) != q2 || !(a < b)) continue;
          EXPECT_TRUE(seen.insert(thm1_pair_index(a, b)).second);
        }
}

// ---------------------------------------------------------------------------

TEST(Thm3, WindowMatchesGadgetArithmetic) {
  Rat a = R("1/4");
  auto fam = thm3_demo_family(a);
  for (long n = 1; n <= 6; ++n) {
    auto win = thm3_window(fam.family, fam.target, n);
    ASSERT_TRUE(win) << n;
    EXPECT_EQ(win->a, a);
    EXPECT_EQ(win->growth, harmonic_growth(a, 1, win->d, win->D)) << n;
    EXPECT_EQ(compare_with_exp(win->growth, n), 1) << n;
    // c is the infimum: its window stays within n, the cutoff stretch exceeds it
    EXPECT_LT(win->L, win->c);
    EXPECT_LE(log_positive_variation(win->pred, win->c, rmin(win->c + pow2(-n), Rat(1))).value.compare_with(n), 0);
    EXPECT_GT(harmonic_growth(a, 1, win->L, rmin(a + pow2(-n), Rat(1))), 0);
    EXPECT_EQ(compare_with_exp(harmonic_growth(a, 1, win->L, a + pow2(-n)), n), 1);
    // every t in [L, c) has a window exceeding n
    for (int k = 0; k < 8; ++k) {
      Rat t = win->L + (win->c - win->L) * Rat(k, 8);
      EXPECT_EQ(compare_with_exp(harmonic_growth(a, 1, t, t + pow2(-n)), n), 1) << n << " " << k;
    }
  }
}

TEST(Thm3, ComponentsBeatExpN) {
  Rat a = R("1/4");
  auto fam = thm3_demo_family(a);
  for (long n = 1; n <= 6; ++n) {
    auto s = realize(thm3_component(fam.family, n));
    Rat c(1, n * n);
    Rat K = run_strategy(s, c, fam.target).final_capital;
    EXPECT_EQ(compare_with_exp(K / c, n), 1) << n;
  }
}

TEST(Thm3, NoRightBlowUpMeansNoBets) {
  auto fam = thm3_demo_family(R("1/4"));
  auto m = build_thm3_strategy(fam.family, {1, 4, false});
  for (const Path& w : {udu(), gadget_path(R("1/2"), Side::left, 2)})
    for (const char* t : {"0", "1/3", "1"}) EXPECT_EQ(evaluate_mixture(m, w, R(t)).total, m.initial_total());
}

TEST(Thm3, ShiftKeepsBoundAndGradesStrongly) {
  auto fam = thm3_demo_family(R("1/4"));
  PlannedStrategy ps = thm3_component(fam.family, 3);
  SimpleStrategy plain = realize(ps), shifted = realize(strengthen_predictability(ps));
  Rat c(1, 9);
  Rat K = run_strategy(shifted, c, fam.target).final_capital;
  EXPECT_EQ(K, run_strategy(plain, c, fam.target).final_capital);
  EXPECT_EQ(compare_with_exp(K / c, 3), 1);
  Market m;
  m.paths = {fam.target};
  m.max_probe_events = 12;
  auto rs = validate_strategy(shifted, m, c);
  EXPECT_TRUE(rs.positive);
  EXPECT_TRUE(rs.deterministic);
  EXPECT_EQ(rs.grade, Grade::strongly_predictable);
  auto rp = validate_strategy(plain, m, c);
  EXPECT_TRUE(rp.positive);
  EXPECT_TRUE(rp.deterministic);
  EXPECT_EQ(rp.grade, Grade::plain);
}

// ---------------------------------------------------------------------------

TEST(Adversary, PathExamples) {
  auto r = adversary_path({Rat(1), {1, -1}});
  EXPECT_EQ(r.values, (std::vector<Rat>{Rat(1), R("3/2"), Rat(1)}));
  EXPECT_EQ(r.path(0), Rat(1));
  EXPECT_EQ(r.path(R("1/2")), R("3/2"));
  EXPECT_EQ(r.path(R("3/4")), Rat(1));
  auto up = adversary_path({Rat(1), std::vector<int>(10, 1)});
  EXPECT_EQ(up.values.back(), Rat(6));
  for (std::size_t i = 1; i < up.values.size(); ++i) EXPECT_GT(up.values[i], up.values[i - 1]);
  EXPECT_FALSE(up.extendable_consistent);
  std::vector<int> alt;
  for (int i = 0; i < 12; ++i) alt.push_back(i % 2 ? -1 : 1);
  auto al = adversary_path({R("1/2"), alt});
  EXPECT_TRUE(al.extendable_consistent);
  for (const auto& s : al.partial_sums) EXPECT_LE(abs(s), R("1/2"));
}

TEST(Adversary, MartingaleExamples) {
  EXPECT_EQ(exact_expected_capital(prefix_cash().alpha, 10, R("7/3")), R("7/3"));
  EXPECT_EQ(exact_expected_capital(prefix_all_in().alpha, 10), Rat(1));
  EXPECT_EQ(exact_expected_capital(prefix_momentum().alpha, 12), Rat(1));
  EXPECT_THROW(exact_expected_capital([](const std::vector<int>&) { return R("3/2"); }, 3), std::invalid_argument);
}

TEST(Adversary, EngineRouteAgrees) {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 6; ++i) {
    auto ps = random_prefix_strategy(rng);
    long I = 8;
    Rat dfs = exact_expected_capital(ps.alpha, I);
    Rat eng = exact_expected_capital_engine(prefix_strategy_on_paths(ps, R("1/2"), I), R("1/2"), I);
    EXPECT_EQ(dfs, eng) << ps.name;
    EXPECT_EQ(dfs, Rat(1));
  }
  // a strategy that peeks at the next sign is caught
  SimpleStrategy peek{"peek",
                      [](const Path& w, const EventState& st) {
                        Decision d;
                        if (st.k > 4) return d;
                        Rat now = adversary_time(1, st.k - 1), nxt = adversary_time(1, st.k);
                        d.bet = w(nxt) > w(now) ? Rat(1) : Rat(0);
                        d.relative = true;
                        d.next_time = nxt;
                        return d;
                      },
                      Grade::plain, std::nullopt};
  EXPECT_THROW(exact_expected_capital_engine(peek, 1, 4), std::invalid_argument);
}
