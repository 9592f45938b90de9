#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wv/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

fs::path scratch() {
  static fs::path d = [] {
    fs::path p = fs::temp_directory_path() / ("wvsim_cli_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

Run wvsim(const std::string& args) {
  const char* bin = std::getenv("WVSIM_BIN");
  REQUIRE(bin != nullptr);
  const fs::path o = scratch() / "stdout.txt", e = scratch() / "stderr.txt";
  const std::string cmd = std::string(bin) + " " + args + " >" + o.string() + " 2>" + e.string();
  int st = std::system(cmd.c_str());
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, slurp(o), slurp(e)};
}

std::string out_dir(const std::string& name) {
  fs::path p = scratch() / name;
  fs::remove_all(p);
  return p.string();
}

}  // namespace

TEST_CASE("list") {
  Run r = wvsim("list");
  CHECK(r.code == 0);
  for (const char* s : {"spin1-sg", "angular-momentum", "nspin", "coherent-transition", "negative-ke",
                        "overall-distribution", "classical-bayes"})
    CHECK(r.out.find(s) != std::string::npos);
  CHECK(r.out.find("tol_scale") != std::string::npos);
}

TEST_CASE("configuration errors exit 2") {
  CHECK(wvsim("").code == 2);
  CHECK(wvsim("run").code == 2);
  Run u = wvsim("run no-such-scenario");
  CHECK(u.code == 2);
  CHECK(u.err.find("no-such-scenario") != std::string::npos);
  Run k = wvsim("run spin1-sg --bogus-key 3");
  CHECK(k.code == 2);
  CHECK(k.err.find("bogus_key") != std::string::npos);
  Run m = wvsim("run spin1-sg --n lots");
  CHECK(m.code == 2);
  CHECK(m.err.find("n") != std::string::npos);
  CHECK(wvsim("run spin1-sg --seed -4").code == 2);
  CHECK(wvsim("run spin1-sg --param nokey").code == 2);
  CHECK(wvsim("run spin1-sg --emit xml").code == 2);
  CHECK(wvsim("run spin1-sg --config /nonexistent/file.json").code == 2);
}

TEST_CASE("dry run writes nothing") {
  const std::string d = out_dir("dry");
  Run r = wvsim("dry-run spin1-sg --out " + d + " --n 4096");
  CHECK(r.code == 0);
  CHECK_FALSE(fs::exists(d));
  nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["params"]["n"] == 4096);
  CHECK(wvsim("run spin1-sg --dry-run --out " + d).code == 0);
  CHECK_FALSE(fs::exists(d));
}

TEST_CASE("precedence: flag over config file over default") {
  const fs::path cfg = scratch() / "cfg.json";
  {
    std::ofstream f(cfg);
    f << R"({"scenario": "coherent-transition", "seed": 9, "params": {"lambda_sq": 16.0, "onset_step": 0.02}})";
  }
  Run r = wvsim("dry-run coherent-transition --config " + cfg.string() + " --lambda-sq 36");
  REQUIRE(r.code == 0);
  nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["params"]["lambda_sq"] == 36);
  CHECK(j["params"]["onset_step"] == 0.02);
  CHECK(j["params"]["n"] == 4096);
  CHECK(j["seed"] == 9);

  const std::string d = out_dir("prec");
  REQUIRE(wvsim("run spin1-sg --out " + d + " --param n=4096 --seed 17").code == 0);
  nlohmann::json p = nlohmann::json::parse(slurp(fs::path(d) / "spin1-sg" / "params.json"));
  CHECK(p["params"]["n"] == 4096);
  CHECK(p["seed"] == 17);
  CHECK(p.contains("derived_seed"));
}

TEST_CASE("default run passes and writes outputs") {
  const std::string d = out_dir("default");
  Run r = wvsim("run spin1-sg --out " + d);
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS spin1-sg/sum-rule") != std::string::npos);
  const fs::path base = fs::path(d) / "spin1-sg";
  CHECK(fs::exists(base / "checks.json"));
  CHECK(fs::exists(base / "params.json"));
  CHECK(fs::is_directory(base / "datasets"));
  nlohmann::json c = nlohmann::json::parse(slurp(base / "checks.json"));
  CHECK(c["all_pass"] == true);

  const std::string d2 = out_dir("json_only");
  CHECK(wvsim("run spin1-sg --emit json --out " + d2).code == 0);
  CHECK_FALSE(fs::exists(fs::path(d2) / "spin1-sg" / "datasets"));
}

TEST_CASE("a failing check exits 1 and is named") {
  Run r = wvsim("run spin1-sg --tol-scale 1e-30 --out " + out_dir("fail"));
  CHECK(r.code == 1);
  CHECK(r.out.find("FAIL spin1-sg/mean-shift") != std::string::npos);
}

TEST_CASE("checks are byte-identical across runs") {
  const std::string a = out_dir("a"), b = out_dir("b");
  REQUIRE(wvsim("run overall-distribution --seed 3 --out " + a).code == 0);
  REQUIRE(wvsim("run overall-distribution --seed 3 --out " + b).code == 0);
  CHECK(slurp(fs::path(a) / "overall-distribution" / "checks.json") ==
        slurp(fs::path(b) / "overall-distribution" / "checks.json"));
}

TEST_CASE("list-valued flags") {
  const std::string d = out_dir("sweep");
  Run r = wvsim("run coherent-transition --lambda-sq 25 --epsilon 0.5,1.0,1.1,4.0 --out " + d);
  CHECK(r.code == 0);
  nlohmann::json p = nlohmann::json::parse(slurp(fs::path(d) / "coherent-transition" / "params.json"));
  CHECK(p["params"]["epsilon"] == nlohmann::json({0.5, 1.0, 1.1, 4.0}));
  for (const char* e : {"eps_0.5_p.csv", "eps_1_p.csv", "eps_1.1_p.csv", "eps_4_p.csv"})
    CHECK(fs::exists(fs::path(d) / "coherent-transition" / "datasets" / e));
}

TEST_CASE("output failure exits 3") {
  const fs::path f = scratch() / "plainfile";
  {
    std::ofstream o(f);
    o << "x";
  }
  Run r = wvsim("run spin1-sg --out " + f.string());
  CHECK(r.code == 3);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("value parsing") {
  CHECK(wv::parse_value("3") == 3);
  CHECK(wv::parse_value("3").is_number_integer());
  CHECK(wv::parse_value("2.5") == 2.5);
  CHECK(wv::parse_value("1e3").is_number_float());
  CHECK(wv::parse_value("0.5,1") == nlohmann::json({0.5, 1}));
  CHECK(wv::parse_value("abc") == "abc");
  CHECK(wv::parse_value("1,x") == "1,x");
}
