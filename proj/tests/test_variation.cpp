#include <gtest/gtest.h>

#include <gtp/variation.hpp>

#include <cmath>

#include "support.hpp"

using namespace gtp;
using gtp::testing::R;
using gtp::testing::step_path;

namespace {

// Brute force over every partition drawn from {0, breakpoints, 1}.
struct Brute {
  Rat total, positive, negative;
  Rat log_total_product = 1, log_positive_product = 1;
};

Brute brute_force(const Path& p) {
  std::vector<Rat> pts{Rat(0)};
  for (const auto& s : p.segments())
    if (s.start > 0) pts.push_back(s.start);
  if (pts.back() != 1) pts.push_back(Rat(1));
  Brute best;
  std::size_t n = pts.size();
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<Rat> part;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) part.push_back(pts[i]);
    Rat tot = 0, pos = 0, neg = 0, lt = 1, lp = 1;
    for (std::size_t i = 1; i < part.size(); ++i) {
      Rat x = p(part[i - 1]), y = p(part[i]);
      Rat d = y - x;
      tot += d < 0 ? Rat(-d) : d;
      if (d > 0) pos += d;
      if (d < 0) neg -= d;
      Rat q = y / x;
      lt *= q > 1 ? q : Rat(1 / q);
      if (q > 1) lp *= q;
    }
    best.total = rmax(best.total, tot);
    best.positive = rmax(best.positive, pos);
    best.negative = rmax(best.negative, neg);
    best.log_total_product = rmax(best.log_total_product, lt);
    best.log_positive_product = rmax(best.log_positive_product, lp);
  }
  return best;
}

Path gadget_on_one(const Rat& acc, Side side, long j0 = 1, GadgetFamily fam = GadgetFamily::telescoping_harmonic) {
  return Path::with_gadgets(Path::constant(1), {Gadget{acc, side, fam, j0}});
}

}  // namespace

TEST(TotalVariation, Examples) {
  Path udu = step_path({{"0", "1"}, {"1/3", "2"}, {"2/3", "1"}});
  EXPECT_EQ(total_variation(udu).value, 2);
  EXPECT_EQ(brute_force(udu).total, 2);
  EXPECT_EQ(total_variation(gtp::testing::identity_path()).value, 1);
  EXPECT_EQ(total_variation(Path::constant(3)).value, 0);
  EXPECT_TRUE(total_variation(udu).is_exact());
}

TEST(PositiveVariation, Examples) {
  Path udu = step_path({{"0", "1"}, {"1/3", "2"}, {"2/3", "1"}});
  EXPECT_EQ(positive_variation(udu).value, 1);
  EXPECT_EQ(brute_force(udu).positive, 1);
  EXPECT_EQ(positive_variation(step_path({{"0", "1"}, {"1/2", "1/2"}})).value, 0);
  auto lv = log_positive_variation(udu);
  EXPECT_EQ(lv.value.product(), 2);
  EXPECT_EQ(lv.value.str(), "log(2)");
  EXPECT_EQ(log_total_variation(udu).value.product(), 4);
}

TEST(Variation, RandomStepPathsAgainstBruteForce) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    Path p = gtp::testing::random_step(rng, 32, 6, 5);
    Brute b = brute_force(p);
    EXPECT_EQ(total_variation(p).value, b.total);
    EXPECT_EQ(positive_variation(p).value, b.positive);
    EXPECT_EQ(negative_variation(p).value, b.negative);
    EXPECT_EQ(total_variation(p).value, positive_variation(p).value + negative_variation(p).value);
    EXPECT_LE(positive_variation(p).value, total_variation(p).value);
    EXPECT_EQ(log_total_variation(p).value.product(), b.log_total_product);
    EXPECT_EQ(log_positive_variation(p).value.product(), b.log_positive_product);
  }
}

TEST(Variation, Additivity) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    Path p = gtp::testing::random_step(rng, 32, 6, 5);
    for (const auto& s : p.segments()) {
      if (s.start == 0) continue;
      EXPECT_EQ(total_variation(p, 0, s.start).value + total_variation(p, s.start, 1).value, total_variation(p).value);
      EXPECT_EQ(log_total_variation(p, 0, s.start).value + log_total_variation(p, s.start, 1).value,
                log_total_variation(p).value);
    }
  }
}

TEST(Variation, LinearPaths) {
  Path zig = Path::linear({{Rat(0), Rat(1)}, {R("1/2"), Rat(3)}, {Rat(1), Rat(2)}});
  EXPECT_EQ(total_variation(zig).value, 3);
  EXPECT_EQ(positive_variation(zig).value, 2);
  EXPECT_EQ(total_variation(zig, R("1/4"), R("3/4")).value, R("3/2"));
  EXPECT_EQ(log_positive_variation(zig).value.product(), 3);
  EXPECT_EQ(log_total_variation(zig).value.product(), R("9/2"));
}

TEST(LocalVariation, StepPaths) {
  Path p = step_path({{"0", "1"}, {"1/2", "2"}});
  EXPECT_EQ(local_variation(p, R("1/2"), Side::left).value, 1);
  EXPECT_EQ(local_variation(p, R("1/2"), Side::right).value, 0);
  EXPECT_EQ(local_variation(p, 0, Side::left).value, 0);
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    Path q = gtp::testing::random_step(rng, 16, 5, 4);
    for (int k = 0; k <= 16; ++k) {
      Rat t(k, 16);
      Rat jump = q(t) - q.left_limit(t);
      EXPECT_EQ(local_variation(q, t, Side::left).value, jump < 0 ? Rat(-jump) : jump);
      EXPECT_EQ(local_variation(q, t, Side::right).value, 0);
    }
  }
}

TEST(LocalVariation, DivergentGadget) {
  Path g = gadget_on_one(R("1/4"), Side::right);
  EXPECT_TRUE(log_local_variation(g, R("1/4"), Side::right).is_infinite());
  EXPECT_EQ(log_local_variation(g, R("1/4"), Side::right).certificate, "telescoping-harmonic");
  EXPECT_FALSE(log_local_variation(g, R("1/4"), Side::left).is_infinite());
  // The certificate: pairs 1..J carry log(J+1) of upward moves.
  for (long J : {4L, 16L, 64L}) {
    Rat ups = 1;
    for (long j = 1; j <= J; ++j) ups *= g.gadgets()[0].ratio(j);
    EXPECT_EQ(ups, J + 1);
  }
}

TEST(InfiniteVariationSets, Examples) {
  auto none = infinite_variation_sets(step_path({{"0", "1"}, {"1/2", "3"}}));
  EXPECT_TRUE(none.I_minus.empty() && none.I_plus.empty() && none.J_minus.empty() && none.J_plus.empty());
  auto right = infinite_variation_sets(gadget_on_one(R("1/4"), Side::right));
  EXPECT_EQ(right.I_plus, std::set<Rat>{R("1/4")});
  EXPECT_EQ(right.J_plus, std::set<Rat>{R("1/4")});
  EXPECT_TRUE(right.I_minus.empty() && right.J_minus.empty());
  auto left = infinite_variation_sets(gadget_on_one(R("1/2"), Side::left, 2));
  EXPECT_EQ(left.I_minus, std::set<Rat>{R("1/2")});
  EXPECT_EQ(left.J_minus, std::set<Rat>{R("1/2")});
  EXPECT_TRUE(left.I_plus.empty() && left.J_plus.empty());
}

TEST(InfiniteVariationSets, ZeroPrices) {
  // Falling into zero: infinite variation but no infinite positive variation.
  auto b = infinite_variation_sets(step_path({{"0", "1"}, {"1/2", "0"}}));
  EXPECT_EQ(b.I_minus, std::set<Rat>{R("1/2")});
  EXPECT_TRUE(b.J_minus.empty());
  auto lin = infinite_variation_sets(Path::linear({{Rat(0), Rat(1)}, {Rat(1), Rat(0)}}));
  EXPECT_EQ(lin.I_minus, std::set<Rat>{Rat(1)});
  EXPECT_TRUE(lin.J_minus.empty());
  EXPECT_TRUE(log_positive_variation(step_path({{"0", "1"}, {"1/2", "0"}})).is_exact());
  // Recovering from zero.
  auto c = infinite_variation_sets(step_path({{"0", "1"}, {"1/3", "0"}, {"2/3", "1"}}));
  EXPECT_EQ(c.J_minus, (std::set<Rat>{R("2/3")}));
  EXPECT_EQ(c.I_minus, (std::set<Rat>{R("1/3"), R("2/3")}));
  auto id = infinite_variation_sets(gtp::testing::identity_path());
  EXPECT_EQ(id.I_plus, std::set<Rat>{Rat(0)});
  EXPECT_EQ(id.J_plus, std::set<Rat>{Rat(0)});
}

TEST(ConvergentGadget, BracketContainsTrueValue) {
  Path g = gadget_on_one(R("1/4"), Side::right, 1, GadgetFamily::geometric_convergent);
  double truth = 0;
  for (long j = 1; j < 60; ++j) truth += 2 * std::log1p(std::ldexp(1.0, -static_cast<int>(j)));
  for (long cut : {4L, 10L, 24L}) {
    auto v = log_total_variation(g, 0, 1, cut);
    ASSERT_EQ(v.kind, VarKind::convergent);
    EXPECT_LE(v.value.to_double(), truth + 1e-12);
    EXPECT_GE(v.value.to_double() + v.tail.to_double(), truth - 1e-12);
  }
  auto coarse = log_total_variation(g, 0, 1, 4), fine = log_total_variation(g, 0, 1, 24);
  EXPECT_LT(fine.tail.to_double(), coarse.tail.to_double());
  auto raw = total_variation(g, 0, 1, 12);
  double raw_truth = 0;
  for (long j = 1; j < 60; ++j) {
    double f = 1 + std::ldexp(1.0, -static_cast<int>(j));
    raw_truth += (1 - 1 / f) + (f - 1) / f;
  }
  EXPECT_LE(to_double(raw.value), raw_truth + 1e-12);
  EXPECT_GE(to_double(raw.value + raw.tail), raw_truth - 1e-12);
}

TEST(DecompositionCheck, HoldsOnBuiltIns) {
  EXPECT_TRUE(decomposition_check(step_path({{"0", "1"}, {"1/2", "2"}})));
  EXPECT_TRUE(decomposition_check(gadget_on_one(R("1/4"), Side::right)));
  EXPECT_TRUE(log_total_variation(gadget_on_one(R("1/4"), Side::right)).is_infinite());
  EXPECT_TRUE(decomposition_check(gadget_on_one(R("1/4"), Side::right, 1, GadgetFamily::geometric_convergent)));
  EXPECT_FALSE(log_total_variation(gadget_on_one(R("1/4"), Side::right, 1, GadgetFamily::geometric_convergent))
                   .is_infinite());
  EXPECT_TRUE(decomposition_check(gadget_on_one(R("3/4"), Side::left)));
  EXPECT_TRUE(decomposition_check(step_path({{"0", "1"}, {"1/2", "0"}})));
  EXPECT_TRUE(decomposition_check(step_path({{"0", "1"}, {"1/3", "0"}, {"2/3", "1"}})));
  EXPECT_TRUE(decomposition_check(gtp::testing::identity_path()));
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    Path p = gtp::testing::random_step(rng, 16, 5, 3);
    EXPECT_TRUE(decomposition_check(p));
    std::vector<Gadget> gs{Gadget{R("1/8"), Side::right, GadgetFamily::telescoping_harmonic, 2},
                           Gadget{R("7/8"), Side::left, GadgetFamily::geometric_convergent, 2}};
    bool clash = false;
    for (const auto& s : p.segments())
      for (const auto& g : gs) clash = clash || g.is_step_time(s.start);
    if (!clash) {
      EXPECT_TRUE(decomposition_check(Path::with_gadgets(p, gs)));
    }
  }
}

TEST(Variation, GadgetWindowsAvoidingTheTail) {
  // Windows that stay clear of the accumulation point are finite and exact.
  Path g = gadget_on_one(R("1/4"), Side::right);
  auto v = log_positive_variation(g, R("1/4") + R("1/64"), 1);
  ASSERT_TRUE(v.is_exact());
  // Ups of pairs 1 and 2 fall inside; pair 3's up sits exactly at the left end.
  EXPECT_EQ(v.value.product(), R("3"));
}
