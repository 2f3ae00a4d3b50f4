#pragma once

// Experiment output: one row per reported quantity, as CSV
// (experiment, parameter, exact_value_num, exact_value_den, float_value) or
// as a JSON document that also carries free-form detail.

#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gtp/path_json.hpp"
#include "gtp/rational.hpp"

namespace gtp {

struct ReportRow {
  std::string experiment;
  std::string parameter;
  std::optional<Rat> exact;  // empty for purely textual rows
  std::optional<double> approx;
  std::string text;
};

class Report {
 public:
  void add(const std::string& exp, const std::string& param, const Rat& v) { rows_.push_back({exp, param, v, to_double(v), {}}); }
  /// A value only known as a float (e^{-x} with infinite x is reported as 0).
  void add_float(const std::string& exp, const std::string& param, double v) {
    rows_.push_back({exp, param, std::nullopt, v, {}});
  }
  void add_flag(const std::string& exp, const std::string& param, bool v) { add(exp, param, Rat(v ? 1 : 0)); }
  void add_text(const std::string& exp, const std::string& param, const std::string& text) {
    rows_.push_back({exp, param, std::nullopt, std::nullopt, text});
  }

  json& detail() { return detail_; }
  const std::vector<ReportRow>& rows() const { return rows_; }

  /// Textual rows carry their text in the parameter column as `name=text`.
  void write_csv(std::ostream& os) const {
    os << "experiment,parameter,exact_value_num,exact_value_den,float_value\n";
    for (const auto& r : rows_) {
      os << field(r.experiment) << ',' << field(r.text.empty() ? r.parameter : r.parameter + "=" + r.text) << ',';
      if (r.exact) os << numerator(*r.exact) << ',' << denominator(*r.exact);
      else os << ',';
      os << ',';
      if (r.approx) os << render(*r.approx);
      os << '\n';
    }
  }

  void write_json(std::ostream& os) const {
    json rows = json::array();
    for (const auto& r : rows_) {
      json j{{"experiment", r.experiment}, {"parameter", r.parameter}};
      if (r.exact) {
        j["exact"] = to_string(*r.exact);
        j["num"] = numerator(*r.exact).str();
        j["den"] = denominator(*r.exact).str();
      }
      if (r.approx) j["float"] = render(*r.approx);
      if (!r.text.empty()) j["text"] = r.text;
      rows.push_back(std::move(j));
    }
    json out{{"rows", rows}};
    if (!detail_.is_null()) out["detail"] = detail_;
    os << out.dump(2) << '\n';
  }

  void write(std::ostream& os, const std::string& format) const {
    if (format == "json") write_json(os);
    else write_csv(os);
  }

 private:
  std::vector<ReportRow> rows_;
  json detail_;

  static std::string render(double x) {
    std::ostringstream s;
    s << std::setprecision(17) << x;
    return s.str();
  }
  static std::string field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') out += '"';
      out += c;
    }
    return out + "\"";
  }
};

}  // namespace gtp
