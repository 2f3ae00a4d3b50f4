#pragma once

// Experiment configuration: a flat JSON object {"cmd": ..., key: value, ...}
// checked against a per-subcommand schema. Every problem is collected.

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gtp/path_json.hpp"
#include "gtp/rational.hpp"

namespace gtp {

enum class KeyType { rational, integer, text, flag };

struct KeySpec {
  std::string name;
  KeyType type = KeyType::text;
  std::string fallback;  // default value; empty and !required means absent
  bool required = false;
  std::vector<std::string> choices;
};

inline const std::map<std::string, std::vector<KeySpec>>& config_schema() {
  using K = KeyType;
  static const std::map<std::string, std::vector<KeySpec>> schema{
      {"upprob",
       {{"path", K::text, "", false, {}},
        {"method", K::text, "both", false, {"formula", "dp", "both"}},
        {"count", K::integer, "100", false, {}}}},
      {"ockham",
       {{"family", K::text, "", true, {}},
        {"omega", K::integer, "0", false, {}},
        {"c", K::rational, "1/3", false, {}},
        {"tag", K::text, "(-,0)", false, {}},
        {"a", K::rational, "1/4", false, {}},
        {"w0", K::text, "1/2,1", false, {}}}},
      {"thm1",
       {{"path", K::text, "", false, {}},
        {"a", K::rational, "1/4", false, {}},
        {"b", K::rational, "3/4", false, {}},
        {"n-max", K::integer, "12", false, {}}}},
      {"thm3",
       {{"a", K::rational, "1/4", false, {}},
        {"n-max", K::integer, "6", false, {}},
        {"shifted", K::flag, "false", false, {}}}},
      {"adversary",
       {{"depth", K::integer, "12", false, {}},
        {"strategy", K::text, "all-in", false, {"all-in", "cash", "momentum", "random"}},
        {"count", K::integer, "20", false, {}},
        {"t", K::rational, "1", false, {}}}},
      {"lemmas", {{"count", K::integer, "50", false, {}}}},
      {"sign", {{"path", K::text, "", true, {}}}},
  };
  return schema;
}

inline const std::vector<KeySpec>& common_keys() {
  static const std::vector<KeySpec> keys{{"cmd", KeyType::text, "", true, {}},
                                         {"seed", KeyType::integer, "0", false, {}},
                                         {"format", KeyType::text, "csv", false, {"csv", "json"}},
                                         {"out", KeyType::text, "", false, {}}};
  return keys;
}

inline std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] != b[j - 1])});
      diag = up;
    }
  }
  return row[b.size()];
}

struct ExperimentConfig {
  std::string cmd;
  std::map<std::string, std::string> params;  // every schema key, defaults filled
  std::uint64_t seed = 0;
  std::string format = "csv";
  std::string out;

  bool has(const std::string& k) const {
    auto it = params.find(k);
    return it != params.end() && !it->second.empty();
  }
  const std::string& text(const std::string& k) const { return params.at(k); }
  Rat rat(const std::string& k) const { return parse_rat(params.at(k)); }
  long integer(const std::string& k) const { return std::stol(params.at(k)); }
  bool flag(const std::string& k) const { return params.at(k) == "true"; }
};

struct ConfigResult {
  ExperimentConfig config;
  std::vector<std::string> errors;
  bool ok() const { return errors.empty(); }
};

namespace detail {

inline std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return v.dump();
  return {};
}

inline void check_value(const KeySpec& k, const std::string& v, std::vector<std::string>& errors) {
  auto bad = [&](const std::string& why) { errors.push_back("key \"" + k.name + "\": " + why); };
  switch (k.type) {
    case KeyType::rational:
      try {
        parse_rat(v);
      } catch (const std::exception& e) {
        bad(e.what());
      }
      break;
    case KeyType::integer: {
      bool digits = !v.empty() && std::all_of(v.begin(), v.end(), [](char c) { return c >= '0' && c <= '9'; });
      if (!digits || v.size() > 19) bad("expected a non-negative integer, got \"" + v + "\"");
      break;
    }
    case KeyType::flag:
      if (v != "true" && v != "false") bad("expected true or false, got \"" + v + "\"");
      break;
    case KeyType::text:
      if (!k.choices.empty() && std::find(k.choices.begin(), k.choices.end(), v) == k.choices.end()) {
        std::string list;
        for (const auto& c : k.choices) list += (list.empty() ? "" : ", ") + c;
        bad("\"" + v + "\" is not one of " + list);
      }
      break;
  }
}

}  // namespace detail

inline ConfigResult validate_config_json(const json& j) {
  ConfigResult res;
  auto& errors = res.errors;
  if (!j.is_object()) {
    errors.push_back("configuration must be a JSON object");
    return res;
  }
  std::string cmd = j.contains("cmd") && j.at("cmd").is_string() ? j.at("cmd").get<std::string>() : "";
  const auto& schema = config_schema();
  auto sub = schema.find(cmd);
  if (cmd.empty()) errors.push_back("missing required key \"cmd\"");
  else if (sub == schema.end()) errors.push_back("unknown subcommand \"" + cmd + "\"");

  std::vector<KeySpec> keys = common_keys();
  if (sub != schema.end()) keys.insert(keys.end(), sub->second.begin(), sub->second.end());
  auto spec_of = [&](const std::string& name) -> const KeySpec* {
    for (const auto& k : keys)
      if (k.name == name) return &k;
    return nullptr;
  };

  std::map<std::string, std::string> given;
  for (const auto& [key, value] : j.items()) {
    const KeySpec* k = spec_of(key);
    if (!k) {
      const KeySpec* near = nullptr;
      std::size_t best = 0;
      for (const auto& c : keys) {
        std::size_t d = edit_distance(key, c.name);
        if (!near || d < best) near = &c, best = d;
      }
      errors.push_back("unknown key \"" + key + "\"" + (near ? " (nearest valid key: \"" + near->name + "\")" : ""));
      continue;
    }
    std::string v = detail::scalar_text(value);
    if (v.empty() && !value.is_string()) {
      errors.push_back("key \"" + key + "\": expected a string, integer or boolean");
      continue;
    }
    detail::check_value(*k, v, errors);
    given[key] = v;
  }
  for (const auto& k : keys) {
    if (given.count(k.name)) continue;
    if (k.required && k.name != "cmd") errors.push_back("missing required key \"" + k.name + "\"");
    given[k.name] = k.fallback;
  }
  if (!errors.empty()) return res;

  auto& c = res.config;
  c.cmd = cmd;
  try {
    c.seed = std::stoull(given.at("seed"));
  } catch (const std::exception&) {
    errors.push_back("key \"seed\": does not fit in 64 bits");
  }
  c.format = given.at("format");
  c.out = given.at("out");
  for (const auto& k : keys)
    if (k.name != "cmd" && k.name != "seed" && k.name != "format" && k.name != "out") c.params[k.name] = given.at(k.name);
  return res;
}

inline ConfigResult validate_config(const std::string& raw) {
  json j;
  try {
    j = json::parse(raw);
  } catch (const json::parse_error& e) {
    ConfigResult res;
    res.errors.push_back(std::string("configuration is not valid JSON: ") + e.what());
    return res;
  }
  return validate_config_json(j);
}

}  // namespace gtp
