#include "wv/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

namespace wv {

namespace fs = std::filesystem;

namespace {

struct HelpRequested {
  std::string text;
  bool error = false;
};

std::string underscored(std::string k) {
  std::replace(k.begin(), k.end(), '-', '_');
  return k;
}

void setup_common(CLI::App* sub, RunConfig& c, std::vector<std::string>& params, std::string& emit,
                  std::string& config_file, std::string& seed_text, std::string& out) {
  sub->add_option("scenario", c.scenario, "scenario name (see `wvsim list`)")->required();
  sub->add_option("--seed", seed_text, "master seed (64-bit unsigned)");
  sub->add_option("--out", out, "output directory (default results)");
  sub->add_option("--param", params, "key=value override, repeatable");
  sub->add_option("--emit", emit, "csv, json or both")->check(CLI::IsMember({"csv", "json", "both"}));
  sub->add_option("--config", config_file, "JSON file with parameters");
  sub->allow_extras();
}

std::uint64_t parse_seed(const std::string& s) {
  try {
    size_t used = 0;
    if (s.empty() || s[0] == '-') throw std::invalid_argument(s);
    unsigned long long v = std::stoull(s, &used, 0);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("malformed value for 'seed': " + s);
  }
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + p.string() + " for writing");
  f << text;
  f.close();
  if (!f) throw IoError("write failed for " + p.string());
}

std::string usage() {
  return "usage: wvsim run <scenario> [--seed N] [--out DIR] [--emit csv|json|both]\n"
         "                 [--config FILE] [--param key=value]... [--<key> <value>]... [--dry-run]\n"
         "       wvsim dry-run <scenario> [same options]\n"
         "       wvsim list\n";
}

}  // namespace

nlohmann::json parse_value(const std::string& text) {
  auto number = [](const std::string& s, nlohmann::json& out) {
    std::istringstream is(s);
    is.imbue(std::locale::classic());
    double v;
    is >> v;
    if (!is || !is.eof()) return false;
    long long iv = static_cast<long long>(v);
    bool integral = s.find_first_of(".eE") == std::string::npos && static_cast<double>(iv) == v;
    out = integral ? nlohmann::json(iv) : nlohmann::json(v);
    return true;
  };
  nlohmann::json out;
  if (text.find(',') != std::string::npos) {
    out = nlohmann::json::array();
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      nlohmann::json v;
      if (!number(item, v)) return text;
      out.push_back(v);
    }
    return out;
  }
  if (number(text, out)) return out;
  return text;
}

RunConfig parse_config(const std::vector<std::string>& args) {
  RunConfig c;
  CLI::App app{"wvsim: weak-measurement scenario runner"};
  app.require_subcommand(1, 1);
  std::vector<std::string> params;
  std::string emit, config_file, seed_text, out;
  CLI::App* run = app.add_subcommand("run", "run a scenario and write its outputs");
  CLI::App* dry = app.add_subcommand("dry-run", "validate a configuration without running");
  app.add_subcommand("list", "list scenarios, their parameters and checks");
  setup_common(run, c, params, emit, config_file, seed_text, out);
  setup_common(dry, c, params, emit, config_file, seed_text, out);
  run->add_flag("--dry-run", c.dry_run, "validate only, write nothing");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::ParseError& e) {
    const bool missing = dynamic_cast<const CLI::RequiredError*>(&e) != nullptr ||
                         std::string(e.what()).find("subcommand") != std::string::npos;
    if (missing) throw HelpRequested{std::string(e.what()) + "\n" + usage(), true};
    throw ConfigError(e.what());
  }

  CLI::App* sub = app.get_subcommands().front();
  c.command = sub->get_name();
  if (c.command == "list") return c;
  if (c.command == "dry-run") c.dry_run = true;

  // config file first, the command line overrides it
  nlohmann::json merged = nlohmann::json::object();
  if (!config_file.empty()) {
    std::ifstream f(config_file);
    if (!f) throw ConfigError("cannot read config file " + config_file);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("malformed config file " + config_file + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string k = underscored(it.key());
      if (k == "params") {
        if (!it->is_object()) throw ConfigError("'params' must be an object");
        for (auto p = it->begin(); p != it->end(); ++p) merged[underscored(p.key())] = *p;
      } else if (k == "scenario") {
        if (!it->is_string() || it->get<std::string>() != c.scenario)
          throw ConfigError("config file names scenario " + it->dump() + ", command line " + c.scenario);
      } else if (k == "seed") {
        if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<long long>() >= 0))
          throw ConfigError("malformed value for 'seed'");
        if (seed_text.empty()) c.seed = it->get<std::uint64_t>();
      } else if (k == "out") {
        if (!it->is_string()) throw ConfigError("malformed value for 'out'");
        if (out.empty()) out = it->get<std::string>();
      } else if (k == "emit") {
        if (!it->is_string()) throw ConfigError("malformed value for 'emit'");
        if (emit.empty()) emit = it->get<std::string>();
      } else {
        merged[k] = *it;
      }
    }
  }
  for (const std::string& kv : params) {
    auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--param expects key=value, got '" + kv + "'");
    merged[underscored(kv.substr(0, eq))] = parse_value(kv.substr(eq + 1));
  }
  // --lambda-sq 25 style flags left over by the parser
  std::vector<std::string> extra = sub->remaining();
  for (size_t i = 0; i < extra.size(); ++i) {
    const std::string& t = extra[i];
    if (t.rfind("--", 0) != 0 || t.size() < 3) throw ConfigError("unexpected argument '" + t + "'");
    std::string key = t.substr(2), val;
    auto eq = key.find('=');
    if (eq != std::string::npos) {
      val = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else {
      if (i + 1 >= extra.size()) throw ConfigError("flag --" + key + " needs a value");
      val = extra[++i];
    }
    merged[underscored(key)] = parse_value(val);
  }

  if (!seed_text.empty()) c.seed = parse_seed(seed_text);
  if (!out.empty()) c.out_dir = out;
  if (!emit.empty()) {
    if (emit != "csv" && emit != "json" && emit != "both") throw ConfigError("malformed value for 'emit': " + emit);
    c.emit_csv = emit != "json";
    c.emit_json = emit != "csv";
  }
  const ScenarioInfo* info = find_scenario(c.scenario);
  if (!info) throw ConfigError("unknown scenario '" + c.scenario + "'");
  c.params = merged;
  c.effective = merge_params(*info, merged);
  return c;
}

void write_outputs(const RunConfig& cfg, const ScenarioResult& r) {
  const fs::path dir = fs::path(cfg.out_dir) / r.name;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  if (cfg.emit_csv) {
    fs::create_directories(dir / "datasets", ec);
    if (ec) throw IoError("cannot create " + (dir / "datasets").string() + ": " + ec.message());
    for (const Dataset& d : r.datasets) write_file(dir / "datasets" / (d.name + ".csv"), d.csv);
  }
  if (cfg.emit_json) {
    nlohmann::json checks = {{"scenario", r.name}, {"all_pass", r.all_pass()}, {"checks", r.checks_json()}};
    nlohmann::json params = {{"scenario", r.name},
                             {"seed", cfg.seed},
                             {"derived_seed", derive_seed(r.name, cfg.seed)},
                             {"params", r.parameters}};
    write_file(dir / "checks.json", checks.dump(2) + "\n");
    write_file(dir / "params.json", params.dump(2) + "\n");
  }
}

int execute(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  if (cfg.command == "list") {
    for (const ScenarioInfo& s : scenario_registry()) {
      out << s.name << "\n  " << s.description << "\n  params:";
      for (auto it = s.defaults.begin(); it != s.defaults.end(); ++it) out << ' ' << it.key() << '=' << it->dump();
      out << "\n  checks:";
      for (const std::string& c : s.checks) out << ' ' << c;
      out << '\n';
    }
    return kExitPass;
  }
  if (cfg.dry_run) {
    out << nlohmann::json{{"scenario", cfg.scenario}, {"seed", cfg.seed}, {"params", cfg.effective}}.dump(2) << '\n';
    return kExitPass;
  }
  ScenarioResult r = run_scenario(cfg.scenario, cfg.params, cfg.seed);
  write_outputs(cfg, r);
  for (const Check& c : r.checks) {
    out << (c.pass ? "PASS " : "FAIL ") << r.name << '/' << c.name << "  got=" << std::setprecision(10) << c.got
        << " expected=" << c.expected;
    if (c.kind == "abs") out << " tol=" << c.tolerance * r.tol_scale;
    else if (c.kind != "flag") out << " (" << c.kind << ')';
    out << '\n';
  }
  return r.all_pass() ? kExitPass : kExitFail;
}

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty()) {
    err << usage();
    return kExitConfig;
  }
  try {
    return execute(parse_config(args), out, err);
  } catch (const HelpRequested& h) {
    (h.error ? err : out) << h.text;
    return h.error ? kExitConfig : kExitPass;
  } catch (const ConfigError& e) {
    err << "wvsim: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    err << "wvsim: " << e.what() << '\n';
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "wvsim: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    err << "wvsim: scenario aborted: " << e.what() << '\n';
    return kExitFail;
  }
}

}  // namespace wv
