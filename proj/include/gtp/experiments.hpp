#pragma once

// The experiment driver behind the command-line tool: one function per
// subcommand, each filling a Report from a validated configuration.

#include <string>
#include <vector>

#include "gtp/config.hpp"
#include "gtp/paths.hpp"
#include "gtp/report.hpp"

namespace gtp {

struct RunResult {
  Report report;
  bool ok = true;  // false when a property suite or identity check failed
};

json load_json_file(const std::string& file);
Path load_path_file(const std::string& file);
std::vector<Rat> parse_rat_list(const std::string& s);

RunResult run_upprob(const ExperimentConfig& c);
RunResult run_ockham(const ExperimentConfig& c);
RunResult run_thm1(const ExperimentConfig& c);
RunResult run_thm3(const ExperimentConfig& c);
RunResult run_adversary(const ExperimentConfig& c);
RunResult run_lemmas(const ExperimentConfig& c);
RunResult run_sign(const ExperimentConfig& c);

/// Dispatches on c.cmd. Throws std::invalid_argument on bad input,
/// UnresolvedError and InvariantViolation as documented per subcommand.
RunResult run_experiment(const ExperimentConfig& c);

}  // namespace gtp
