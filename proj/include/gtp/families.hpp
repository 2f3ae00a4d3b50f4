#pragma once

// Built-in well-ordered families and the family JSON format:
//
//   {"segments":[{"kind":"finite","paths":[...]},
//                {"kind":"omega","family":"lemma6-ramp","c":"1/3"}],
//    "target": <path> | {"member": k}}

#include <gtp/path_json.hpp>
#include <gtp/wellorder.hpp>

#include <string>
#include <vector>

namespace gtp {

/// 1 + t, the common continuation of the ramp members.
inline Path ramp_limit_path() { return Path::linear({{Rat(0), Rat(1)}, {Rat(1), Rat(2)}}); }

/// Omega-block whose m-th member follows 1 + t up to c m/(m+1) and is flat
/// afterwards (written omega_n with n = m + 1 in the classical display).
inline OmegaBlock ramp_block(const Rat& c) {
  if (!(c > 0 && c < 1)) throw std::invalid_argument("ramp block needs c in (0,1)");
  OmegaBlock b;
  b.kind = "lemma6-ramp";
  b.param = c;
  auto time = [c](long m) { return Rat(c * m / (m + 1)); };
  b.member = [time](long m) {
    Rat s = time(m);
    return Path::piecewise({{Rat(0), Rat(1), Rat(1)}, {s, 1 + s, Rat(0)}});
  };
  b.label = [](long m) { return "omega_" + std::to_string(m + 1); };
  b.profile = [c, time, member = b.member](const Path& target) -> std::optional<OmegaProfile> {
    OmegaProfile p;
    p.run_time = time;
    p.limit = c;
    // least m >= 1 with c m/(m+1) >= x (> x if strict); needs x < c
    p.run_first = [c](const Rat& x, bool strict) -> long {
      if (x < 0 || (!strict && x == 0)) return 1;
      Rat y = x / (c - x);
      Int fl = numerator(y) / denominator(y);
      Int m = strict ? Int(fl + 1) : Int(Rat(fl) == y ? fl : fl + 1);
      return std::max(1L, m.convert_to<long>());
    };
    Agreement lim = agreement_time(target, ramp_limit_path());
    if (lim.time >= c) {
      p.run_end = -1;
      return p;
    }
    p.run_end = p.run_first(lim.time, false) - 1;
    p.middle = {agreement_time(member(p.run_end + 1), target)};
    p.tail = lim;
    return p;
  };
  return b;
}

struct NamedFamily {
  std::string name;
  WellOrderedFamily family;
  Path target;
  std::string target_label;
};

struct FamilyParams {
  Rat c = Rat(1, 3);
  std::string tag = "(-,0)";
  std::vector<Rat> W0{Rat(1, 2), Rat(1)};
  Rat a = Rat(1, 4);
  int member = 0;  // 1-based target among the finite members, 0 = default
};

namespace detail {

inline Path flat_then(const Rat& c, const Rat& before, const Rat& after, const Rat& slope_after) {
  return Path::piecewise({{Rat(0), before, Rat(0)}, {c, after, slope_after}});
}
inline Path ramp_then(const Rat& c, const Rat& after, const Rat& slope_after) {
  return Path::piecewise({{Rat(0), Rat(1), Rat(1)}, {c, after, slope_after}});
}

inline NamedFamily pick(NamedFamily nf, std::size_t block, std::size_t i) {
  const auto& f = std::get<FiniteBlock>(nf.family.blocks()[block]);
  nf.target = f.paths[i];
  nf.target_label = f.labels[i];
  return nf;
}

inline NamedFamily pick_member(NamedFamily nf, int k) {
  int seen = 0;
  for (std::size_t s = 0; s < nf.family.blocks().size(); ++s) {
    if (auto* f = std::get_if<FiniteBlock>(&nf.family.blocks()[s])) {
      for (std::size_t i = 0; i < f->paths.size(); ++i)
        if (++seen == k) return pick(std::move(nf), s, i);
    }
  }
  throw std::invalid_argument("family \"" + nf.name + "\" has no finite member " + std::to_string(k));
}

}  // namespace detail

inline NamedFamily lemma5_family() {
  Rat q(1, 4), h(1, 2), tq(3, 4);
  NamedFamily nf{"lemma5", {}, {}, {}};
  nf.family.add_finite({Path::constant(1), Path::piecewise({{0, 1, 0}, {q, 1, 1}}),
                        Path::piecewise({{0, 1, 0}, {q, 1, 1}, {h, 1, 0}}),
                        Path::piecewise({{0, 1, 0}, {q, 1, 1}, {h, 1, 0}, {tq, 1, 1}})});
  return detail::pick(std::move(nf), 0, 3);
}

/// Witness families for the eight success classes at a time c in (0,1).
inline NamedFamily lemma6_family(const Rat& c, const std::string& tag) {
  if (!(c > 0 && c < 1)) throw std::invalid_argument("lemma6 needs c in (0,1)");
  using detail::flat_then;
  using detail::ramp_then;
  NamedFamily nf{"lemma6", {}, {}, {}};
  SuccessClass cls = SuccessClass::from_tag(tag);
  std::string t = cls.tag();
  if (t == "(-,0)" || t == "(-,0,+)") {
    nf.family.add_finite({Path::constant(1), flat_then(c, 1, 1, 1)});
    return detail::pick(std::move(nf), 0, t == "(-,0)" ? 1 : 0);
  }
  if (t == "(0,+)" || t == "(0)") {
    nf.family.add_finite({Path::constant(2)}, {"omega_1"});
    nf.family.add_omega(ramp_block(c));
    nf.family.add_finite({ramp_then(c, 1 + c, 0), ramp_limit_path()}, {"omega_w", "omega_w+1"});
    return detail::pick(std::move(nf), 2, t == "(0,+)" ? 0 : 1);
  }
  if (t == "(-,+)" || t == "(-)") {
    nf.family.add_finite({Path::constant(1), flat_then(c, 1, 2, 0), flat_then(c, 1, 2, 1)});
    return detail::pick(std::move(nf), 0, t == "(-,+)" ? 1 : 2);
  }
  if (t == "(+)" || t == "()") {
    nf.family.add_finite({Path::constant(1)}, {"omega_1"});
    nf.family.add_omega(ramp_block(c));
    nf.family.add_finite({ramp_then(c, 1 + c, 0), ramp_then(c, 2, 0), ramp_then(c, 2, 1)},
                         {"omega_w", "omega_w+1", "omega_w+2"});
    return detail::pick(std::move(nf), 2, t == "(+)" ? 1 : 2);
  }
  throw std::invalid_argument("unknown success class tag \"" + tag + "\"");
}

/// Continuous-path witnesses for the classes (+) and () at time 0.
inline NamedFamily lemma6_zero_family(const std::string& tag) {
  NamedFamily nf{"lemma6-zero", {}, {}, {}};
  nf.family.add_finite({Path::constant(1), Path::constant(2), Path::linear({{Rat(0), Rat(2)}, {Rat(1), Rat(3)}})});
  std::string t = SuccessClass::from_tag(tag).tag();
  if (t == "(+)") return detail::pick(std::move(nf), 0, 1);
  if (t == "()") return detail::pick(std::move(nf), 0, 2);
  throw std::invalid_argument("lemma6-zero supports the tags (+) and ()");
}

/// Paths t -> min(t, w) for w in W0 (increasing), then a constant background;
/// the target is the identity.
inline NamedFamily lemma7_family(std::vector<Rat> W0) {
  std::sort(W0.begin(), W0.end());
  W0.erase(std::unique(W0.begin(), W0.end()), W0.end());
  if (W0.empty() || W0.back() != 1) throw std::invalid_argument("lemma7 needs 1 in W0");
  if (W0.front() <= 0) throw std::invalid_argument("lemma7 needs W0 in (0,1]");
  NamedFamily nf{"lemma7", {}, {}, {}};
  std::vector<Path> paths;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < W0.size(); ++i) {
    const Rat& w = W0[i];
    paths.push_back(w == 1 ? Path::linear({{Rat(0), Rat(0)}, {Rat(1), Rat(1)}})
                           : Path::piecewise({{Rat(0), Rat(0), Rat(1)}, {w, w, Rat(0)}}));
    labels.push_back("omega_" + std::to_string(i) + " (w=" + to_string(w) + ")");
  }
  nf.family.add_finite(paths, labels);
  nf.family.add_finite({Path::constant(1)}, {"background"});
  return detail::pick(std::move(nf), 0, W0.size() - 1);
}

inline NamedFamily thm1_demo_family() {
  NamedFamily nf{"thm1_demo", {}, {}, {}};
  nf.family.add_finite({Path::linear({{Rat(0), Rat(0)}, {Rat(1), Rat(1)}})}, {"identity"});
  return detail::pick(std::move(nf), 0, 0);
}

/// First member: constant 1 with a divergent right gadget at a.
inline NamedFamily thm3_demo_family(const Rat& a) {
  if (!(a >= 0 && a < 1)) throw std::invalid_argument("thm3_demo needs a in [0,1)");
  long j0 = 1;
  while (a + pow2(-2 * j0) > 1) ++j0;
  NamedFamily nf{"thm3_demo", {}, {}, {}};
  nf.family.add_finite(
      {Path::with_gadgets(Path::constant(1), {Gadget{a, Side::right, GadgetFamily::telescoping_harmonic, j0}})},
      {"gadget"});
  return detail::pick(std::move(nf), 0, 0);
}

inline NamedFamily build_named_family(const std::string& name, const FamilyParams& p = {}) {
  NamedFamily nf;
  if (name == "lemma5") nf = lemma5_family();
  else if (name == "lemma6") nf = lemma6_family(p.c, p.tag);
  else if (name == "lemma6-zero") nf = lemma6_zero_family(p.tag);
  else if (name == "lemma7") nf = lemma7_family(p.W0);
  else if (name == "thm1_demo") nf = thm1_demo_family();
  else if (name == "thm3_demo") nf = thm3_demo_family(p.a);
  else throw std::invalid_argument("unknown family \"" + name + "\"");
  if (p.member > 0) nf = detail::pick_member(std::move(nf), p.member);
  return nf;
}

inline const std::vector<std::string>& named_family_names() {
  static const std::vector<std::string> names{"lemma5", "lemma6", "lemma6-zero", "lemma7", "thm1_demo", "thm3_demo"};
  return names;
}

/// One instance of every built-in construction, over a couple of parameters.
inline std::vector<NamedFamily> builtin_families() {
  std::vector<NamedFamily> out;
  out.push_back(lemma5_family());
  for (int k = 1; k <= 3; ++k) out.push_back(build_named_family("lemma5", {.member = k}));
  for (const char* tag : {"(-,0,+)", "(-,0)", "(0,+)", "(0)", "(-,+)", "(-)", "(+)", "()"})
    for (const Rat& c : {Rat(1, 3), Rat(5, 7)}) out.push_back(lemma6_family(c, tag));
  out.push_back(lemma6_zero_family("(+)"));
  out.push_back(lemma6_zero_family("()"));
  out.push_back(lemma7_family({Rat(1, 2), Rat(1)}));
  out.push_back(lemma7_family({Rat(1, 8), Rat(1, 3), Rat(2, 3), Rat(1)}));
  out.push_back(thm1_demo_family());
  out.push_back(thm3_demo_family(Rat(1, 4)));
  return out;
}

/// Family with `path` appended as a last finite member.
inline WellOrderedFamily with_member(WellOrderedFamily f, const Path& path, const std::string& label = "appended") {
  f.add_finite({path}, {label});
  return f;
}

inline NamedFamily family_from_json(const json& j) {
  if (!j.is_object() || !j.contains("segments") || !j.at("segments").is_array())
    throw ParseError("family JSON needs a \"segments\" array");
  NamedFamily nf{"custom", {}, {}, {}};
  for (const auto& seg : j.at("segments")) {
    std::string kind = seg.value("kind", "");
    if (kind == "finite") {
      std::vector<Path> paths;
      for (const auto& p : seg.at("paths")) paths.push_back(path_from_json(p));
      std::vector<std::string> labels;
      if (seg.contains("labels")) labels = seg.at("labels").get<std::vector<std::string>>();
      nf.family.add_finite(std::move(paths), std::move(labels));
    } else if (kind == "omega") {
      std::string fam = seg.value("family", "");
      if (fam != "lemma6-ramp") throw ParseError("unknown omega-block family \"" + fam + "\"");
      nf.family.add_omega(ramp_block(rat_from_json(seg.at("c"), "c")));
    } else {
      throw ParseError("family segment kind must be \"finite\" or \"omega\"");
    }
  }
  if (nf.family.blocks().empty()) throw ParseError("family JSON has no segments");
  if (!j.contains("target")) throw ParseError("family JSON needs a \"target\"");
  const json& t = j.at("target");
  if (t.is_object() && t.contains("member")) return detail::pick_member(std::move(nf), t.at("member").get<int>());
  nf.target = path_from_json(t);
  nf.target_label = "target";
  return nf;
}

}  // namespace gtp
