#pragma once

// JSON encoding of paths. Rationals are strings "p/q" (integers may also be
// given as JSON numbers).
//
//   {"kind":"step",   "points":[["0","1"],["1/2","2"]]}
//   {"kind":"linear", "points":[["0","0"],["1","1"]]}
//   {"kind":"piecewise", "segments":[["0","1","0"],["1/4","1","1"]]}
//   {"kind":"gadget", "points":[["0","1"]], "accumulation":"1/4", "side":"right",
//    "family":"telescoping-harmonic", "first_index":1}
//
// A gadget path may list several gadgets under "gadgets" and may give its
// base as "segments" instead of "points".

#include <gtp/paths.hpp>

#include <json.hpp>

#include <string>

namespace gtp {

using json = nlohmann::json;

inline Rat rat_from_json(const json& j, const std::string& what) {
  if (j.is_string()) return parse_rat(j.get<std::string>());
  if (j.is_number_integer()) return Rat(j.get<long long>());
  throw ParseError(what + ": expected a rational string, got " + j.dump());
}

namespace detail {

inline const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("path JSON: missing \"") + key + "\"");
  return j.at(key);
}

inline std::vector<std::pair<Rat, Rat>> parse_points(const json& pts) {
  if (!pts.is_array() || pts.empty()) throw ParseError("path JSON: \"points\" must be a non-empty array");
  std::vector<std::pair<Rat, Rat>> out;
  for (const auto& p : pts) {
    if (!p.is_array() || p.size() != 2) throw ParseError("path JSON: each point must be [time, value]");
    out.emplace_back(rat_from_json(p[0], "point time"), rat_from_json(p[1], "point value"));
  }
  return out;
}

inline std::vector<Segment> parse_segments(const json& segs) {
  if (!segs.is_array() || segs.empty()) throw ParseError("path JSON: \"segments\" must be a non-empty array");
  std::vector<Segment> out;
  for (const auto& s : segs) {
    if (!s.is_array() || (s.size() != 2 && s.size() != 3))
      throw ParseError("path JSON: each segment must be [start, value, slope]");
    out.push_back({rat_from_json(s[0], "segment start"), rat_from_json(s[1], "segment value"),
                   s.size() == 3 ? rat_from_json(s[2], "segment slope") : Rat(0)});
  }
  return out;
}

inline Side parse_side(const std::string& s) {
  if (s == "left") return Side::left;
  if (s == "right") return Side::right;
  throw ParseError("gadget side must be \"left\" or \"right\", got \"" + s + "\"");
}

inline GadgetFamily parse_family(const std::string& s) {
  if (s == "telescoping-harmonic") return GadgetFamily::telescoping_harmonic;
  if (s == "geometric-convergent") return GadgetFamily::geometric_convergent;
  throw ParseError("unknown gadget family \"" + s + "\"");
}

inline Gadget parse_gadget(const json& g) {
  Gadget out;
  out.accumulation = rat_from_json(require(g, "accumulation"), "accumulation");
  out.side = g.contains("side") ? parse_side(g.at("side").get<std::string>()) : Side::right;
  out.family = g.contains("family") ? parse_family(g.at("family").get<std::string>())
                                    : GadgetFamily::telescoping_harmonic;
  out.first_index = g.contains("first_index") ? g.at("first_index").get<long>() : 1;
  return out;
}

}  // namespace detail

inline Path path_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("path JSON must be an object");
  std::string kind = j.value("kind", "");
  bool canonical = !j.value("non_canonical", false);
  auto base = [&]() {
    if (j.contains("segments")) return Path::piecewise(detail::parse_segments(j.at("segments")));
    return Path::step(detail::parse_points(detail::require(j, "points")), canonical);
  };
  if (kind == "step") return Path::step(detail::parse_points(detail::require(j, "points")), canonical);
  if (kind == "linear") return Path::linear(detail::parse_points(detail::require(j, "points")));
  if (kind == "piecewise") return Path::piecewise(detail::parse_segments(detail::require(j, "segments")));
  if (kind == "gadget") {
    std::vector<Gadget> gs;
    if (j.contains("gadgets")) {
      for (const auto& g : j.at("gadgets")) gs.push_back(detail::parse_gadget(g));
    } else {
      gs.push_back(detail::parse_gadget(j));
    }
    return Path::with_gadgets(base(), gs);
  }
  throw ParseError("path JSON: unknown kind \"" + kind + "\"");
}

inline json path_to_json(const Path& p) {
  json j;
  j["kind"] = to_string(p.kind());
  auto points = [&] {
    json pts = json::array();
    for (const auto& s : p.segments()) pts.push_back({to_string(s.start), to_string(s.value)});
    return pts;
  };
  auto segments = [&] {
    json segs = json::array();
    for (const auto& s : p.segments()) segs.push_back({to_string(s.start), to_string(s.value), to_string(s.slope)});
    return segs;
  };
  switch (p.kind()) {
    case PathKind::step:
      j["points"] = points();
      if (!p.canonical()) j["non_canonical"] = true;
      break;
    case PathKind::linear: {
      json pts = json::array();
      for (const auto& s : p.segments()) pts.push_back({to_string(s.start), to_string(s.value)});
      if (p.segments().back().start != 1) pts.push_back({"1", to_string(p(1))});
      j["points"] = pts;
      break;
    }
    case PathKind::piecewise:
      j["segments"] = segments();
      break;
    case PathKind::gadget: {
      if (p.is_step_base()) j["points"] = points();
      else j["segments"] = segments();
      json gs = json::array();
      for (const auto& g : p.gadgets())
        gs.push_back({{"accumulation", to_string(g.accumulation)},
                      {"side", to_string(g.side)},
                      {"family", to_string(g.family)},
                      {"first_index", g.first_index}});
      j["gadgets"] = gs;
      break;
    }
  }
  return j;
}

}  // namespace gtp
