#pragma once
// wvsim command line: run / list / dry-run.
// Exit codes: 0 all checks pass, 1 a check failed, 2 bad configuration, 3 I/O failure.
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wv/scenarios.hpp"

namespace wv {

enum ExitCode { kExitPass = 0, kExitFail = 1, kExitConfig = 2, kExitIo = 3 };

struct RunConfig {
  std::string command;   // run, list or dry-run
  std::string scenario;
  nlohmann::json params = nlohmann::json::object();  // overrides only
  nlohmann::json effective;                          // defaults merged with overrides
  std::uint64_t seed = 0;
  std::string out_dir = "results";
  bool emit_csv = true;
  bool emit_json = true;
  bool dry_run = false;
};

// argument list without the program name. Precedence: flag > config file > default.
// Throws ConfigError naming the offending key; unknown keys are rejected here,
// before anything runs.
RunConfig parse_config(const std::vector<std::string>& args);

// "0.5,1.0" -> [0.5, 1.0]; numbers -> number; anything else -> string
nlohmann::json parse_value(const std::string& text);

// writes <out>/<scenario>/{datasets/*.csv, checks.json, params.json}
void write_outputs(const RunConfig& cfg, const ScenarioResult& r);

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// full entry point: parse, execute, map errors to exit codes
int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace wv
