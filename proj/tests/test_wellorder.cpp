#include <gtest/gtest.h>

#include <gtp/families.hpp>

#include "support.hpp"

using namespace gtp;
using gtp::testing::R;

namespace {

std::vector<Rat> interior_samples(const TimeSet& F, long per_sequence = 6) {
  std::vector<Rat> out;
  for (const auto& t : F.sample(per_sequence)) {
    out.push_back(t);
    if (auto next = F.successor(t)) {
      for (int k = 1; k <= 5; ++k) out.push_back(t + (*next - t) * Rat(k, 6));
    }
  }
  return out;
}

std::vector<NamedFamily> all_builtins() {
  std::vector<NamedFamily> out;
  out.push_back(lemma5_family());
  for (int k = 1; k <= 4; ++k) out.push_back(build_named_family("lemma5", {.member = k}));
  for (const char* tag : {"(-,0,+)", "(-,0)", "(0,+)", "(0)", "(-,+)", "(-)", "(+)", "()"})
    for (const char* c : {"1/3", "5/7"}) out.push_back(lemma6_family(R(c), tag));
  out.push_back(lemma6_zero_family("(+)"));
  out.push_back(lemma6_zero_family("()"));
  out.push_back(lemma7_family({R("1/2"), Rat(1)}));
  out.push_back(lemma7_family({R("1/8"), R("1/3"), R("2/3"), Rat(1)}));
  out.push_back(thm1_demo_family());
  out.push_back(thm3_demo_family(R("1/4")));
  return out;
}

}  // namespace

TEST(Predict, Lemma5Examples) {
  NamedFamily nf = lemma5_family();
  EXPECT_EQ(predict(nf.family, nf.target, R("3/10"), PredictMode::closed).label, "omega_2");
  EXPECT_EQ(predict(nf.family, nf.target, R("3/5"), PredictMode::closed).label, "omega_3");
  EXPECT_EQ(predict(nf.family, nf.target, Rat(1), PredictMode::closed).label, "omega_4");
  EXPECT_EQ(predict(nf.family, nf.target, R("1/2"), PredictMode::open).label, "omega_2");
  EXPECT_EQ(predict(nf.family, nf.target, R("1/2"), PredictMode::closed).label, "omega_3");
  EXPECT_EQ(predict(nf.family, nf.target, R("1/4"), PredictMode::closed).label, "omega_1");
  EXPECT_EQ(predict(nf.family, nf.target, R("1/4"), PredictMode::right).label, "omega_2");
  EXPECT_EQ(nf.family.order_type(), "4");
}

TEST(Predict, ErrorsOutsideFamily) {
  NamedFamily nf = thm1_demo_family();
  EXPECT_THROW(predict(nf.family, Path::constant(5), R("1/2"), PredictMode::closed), std::invalid_argument);
  EXPECT_THROW(predict(nf.family, nf.target, Rat(1), PredictMode::right), std::invalid_argument);
}

TEST(FailureSets, Lemma5) {
  NamedFamily nf = lemma5_family();
  auto [W, F] = failure_sets(nf.family, nf.target);
  EXPECT_TRUE(W.finite());
  EXPECT_EQ(W.sample(), (std::vector<Rat>{R("1/4"), R("3/4"), Rat(1)}));
  EXPECT_EQ(F.sample(), (std::vector<Rat>{Rat(0), R("1/4"), R("1/2"), R("3/4"), Rat(1)}));
  // Predictions change inside the W-gap (1/4, 3/4).
  EXPECT_NE(predict(nf.family, nf.target, R("3/10"), PredictMode::closed).index,
            predict(nf.family, nf.target, R("3/5"), PredictMode::closed).index);
}

TEST(FailureSets, Lemma7) {
  NamedFamily nf = lemma7_family({R("1/2"), Rat(1)});
  auto [W, F] = failure_sets(nf.family, nf.target);
  EXPECT_EQ(W.sample(), (std::vector<Rat>{R("1/2"), Rat(1)}));
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    std::uniform_int_distribution<int> size(0, 7), num(1, 63);
    std::set<Rat> w0{Rat(1)};
    int n = size(rng);
    for (int i = 0; i < n; ++i) w0.insert(Rat(num(rng), 64));
    NamedFamily f = lemma7_family({w0.begin(), w0.end()});
    auto sets = failure_sets(f.family, f.target);
    EXPECT_EQ(sets.first.sample(), (std::vector<Rat>{w0.begin(), w0.end()}));
  }
}

TEST(FailureSets, RampFamiliesAreInfinite) {
  NamedFamily nf = lemma6_family(R("1/3"), "(0,+)");
  auto [W, F] = failure_sets(nf.family, nf.target);
  EXPECT_FALSE(W.finite());
  // c m/(m+1) for m = 1, 2, ...: 1/6, 2/9, 1/4, ...
  EXPECT_TRUE(W.contains(R("1/6")));
  EXPECT_TRUE(W.contains(R("2/9")));
  EXPECT_TRUE(W.contains(R("1/4")));
  EXPECT_FALSE(W.contains(R("1/5")));
  EXPECT_EQ(W.successor(R("1/6")), R("2/9"));
  EXPECT_EQ(W.successor(R("1/5")), R("2/9"));
  EXPECT_TRUE(F.contains(R("1/3")));
  EXPECT_FALSE(W.contains(R("1/3")));
}

TEST(ClassifySuccess, Lemma6ClassesAreSingletons) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> num(1, 98);
  for (int k = 0; k < 5; ++k) {
    Rat c(num(rng), 99);
    for (const char* tag : {"(-,0)", "(0,+)", "(0)", "(-,+)", "(-)", "(+)", "()"}) {
      NamedFamily nf = lemma6_family(c, tag);
      OckhamAnalysis a(nf.family, nf.target);
      EXPECT_EQ(a.classify(c).tag(), tag) << to_string(c);
      for (const auto& ct : classify_success(nf.family, nf.target)) {
        if (ct.time == 0 || ct.time == 1 || ct.time == c) continue;
        EXPECT_NE(ct.cls.tag(), tag) << tag << " at " << to_string(ct.time) << " c=" << to_string(c);
      }
    }
    NamedFamily least = lemma6_family(c, "(-,0,+)");
    EXPECT_TRUE(OckhamAnalysis(least.family, least.target).classify(c).all());
  }
}

TEST(ClassifySuccess, Examples) {
  NamedFamily a = lemma6_family(R("1/3"), "(-,0)");
  EXPECT_EQ(OckhamAnalysis(a.family, a.target).classify(R("1/3")), (SuccessClass{true, true, false}));
  NamedFamily b = lemma6_family(R("1/3"), "(0,+)");
  EXPECT_EQ(OckhamAnalysis(b.family, b.target).classify(R("1/3")), (SuccessClass{false, true, true}));
  NamedFamily l5 = lemma5_family();
  const Path& least = std::get<FiniteBlock>(l5.family.blocks()[0]).paths[0];
  EXPECT_TRUE(OckhamAnalysis(l5.family, least).classify(R("1/2")).all());
  NamedFamily z = lemma6_zero_family("(+)");
  EXPECT_EQ(OckhamAnalysis(z.family, z.target).classify(0).tag(), "(+)");
  NamedFamily zz = lemma6_zero_family("()");
  EXPECT_EQ(OckhamAnalysis(zz.family, zz.target).classify(0).tag(), "()");
  // Every time outside 0 is present-successful for continuous targets here.
  for (const auto& ct : classify_success(zz.family, zz.target)) {
    if (ct.time > 0) {
      EXPECT_TRUE(ct.cls.present);
    }
  }
}

TEST(Invariants, StructuralPropertiesOnBuiltins) {
  for (const auto& nf : all_builtins()) {
    OckhamAnalysis a(nf.family, nf.target);
    TimeSet W = a.W(), F = a.F();
    EXPECT_TRUE(W.contains(1)) << nf.name;
    EXPECT_TRUE(F.contains(0) && F.contains(1)) << nf.name;
    for (const auto& w : W.sample(8)) {
      EXPECT_TRUE(F.contains(w)) << nf.name << " " << to_string(w);
    }
    for (const auto& x : F.sample(8)) {
      if (x == 1) continue;
      auto next = F.successor(x);
      ASSERT_TRUE(next.has_value()) << nf.name;
      EXPECT_GT(*next, x);
    }
    for (const auto& t : interior_samples(F)) {
      SuccessClass cls = a.classify(t);
      EXPECT_EQ(!cls.future, W.contains(t)) << nf.name << " " << to_string(t);
      EXPECT_EQ(!cls.all(), F.contains(t)) << nf.name << " " << to_string(t);
      for (PredictMode mode : {PredictMode::closed, PredictMode::open, PredictMode::right}) {
        if (mode == PredictMode::right && t == 1) continue;
        EXPECT_EQ(a.predict(t, mode).index, predict(nf.family, nf.target, t, mode).index)
            << nf.name << " " << to_string(t) << " " << to_string(mode);
      }
    }
  }
}

TEST(Invariants, ConstancyBetweenFailurePoints) {
  for (const auto& nf : all_builtins()) {
    auto [W, F] = failure_sets(nf.family, nf.target);
    for (const auto& x : F.sample(6)) {
      auto next = F.successor(x);
      if (!next) continue;
      auto first = predict(nf.family, nf.target, x + (*next - x) / 6, PredictMode::closed).index;
      for (int k = 2; k <= 5; ++k)
        EXPECT_EQ(predict(nf.family, nf.target, x + (*next - x) * Rat(k, 6), PredictMode::closed).index, first)
            << nf.name << " gap after " << to_string(x);
      // The right prediction at x is the closed prediction just after x.
      EXPECT_EQ(predict(nf.family, nf.target, x, PredictMode::right).index, first) << nf.name;
    }
  }
}

TEST(Invariants, ContinuousFamiliesConstantBetweenW) {
  std::vector<NamedFamily> continuous{lemma6_family(R("2/5"), "(-,0)"), lemma6_family(R("2/5"), "(0,+)"),
                                      lemma6_family(R("2/5"), "(0)"), lemma7_family({R("1/3"), R("1/2"), Rat(1)}),
                                      lemma6_zero_family("(+)")};
  for (const auto& nf : continuous) {
    auto [W, F] = failure_sets(nf.family, nf.target);
    for (const auto& x : W.sample(6)) {
      auto next = W.successor(x);
      if (!next) continue;
      auto first = predict(nf.family, nf.target, x + (*next - x) / 6, PredictMode::closed).index;
      for (int k = 2; k <= 5; ++k)
        EXPECT_EQ(predict(nf.family, nf.target, x + (*next - x) * Rat(k, 6), PredictMode::closed).index, first);
    }
  }
}

TEST(RampBlock, ProfileMatchesDirectAgreement) {
  OmegaBlock b = ramp_block(R("2/5"));
  std::vector<Path> targets{ramp_limit_path(), Path::constant(1), lemma6_family(R("2/5"), "(0)").target,
                            Path::piecewise({{0, 1, 1}, {R("1/5"), R("6/5"), 0}}),
                            Path::piecewise({{0, 1, 1}, {R("3/10"), 2, 0}}),
                            Path::piecewise({{0, 1, 1}, {R("4/15"), R("19/15"), 0}})};
  for (const auto& target : targets) {
    OmegaProfile p = *b.profile(target);
    for (long m = 1; m <= 40; ++m) EXPECT_EQ(p.coverage(m), agreement_time(b.member(m), target)) << m;
    for (int k = 0; k < 40; ++k) {
      Rat x(k, 100);
      if (x >= R("2/5")) break;
      for (bool strict : {false, true}) {
        long m = p.run_first(x, strict);
        Rat tm = p.run_time(m);
        EXPECT_TRUE(strict ? tm > x : tm >= x);
        if (m > 1) {
          EXPECT_FALSE(strict ? p.run_time(m - 1) > x : p.run_time(m - 1) >= x);
        }
      }
    }
  }
}

TEST(FamilyJson, RoundTripThroughSegments) {
  json j = json::parse(R"({"segments":[{"kind":"finite","paths":[{"kind":"step","points":[["0","2"]]}]},
                                       {"kind":"omega","family":"lemma6-ramp","c":"1/3"},
                                       {"kind":"finite","paths":[{"kind":"piecewise","segments":[["0","1","1"],["1/3","4/3","0"]]}]}],
                          "target":{"member":2}})");
  NamedFamily nf = family_from_json(j);
  EXPECT_EQ(nf.family.order_type(), "omega + 1");
  OckhamAnalysis a(nf.family, nf.target);
  EXPECT_EQ(a.classify(R("1/3")).tag(), "(0,+)");
  EXPECT_THROW(family_from_json(json::parse(R"({"segments":[{"kind":"omega","family":"nope"}],"target":{"member":1}})")),
               ParseError);
}
