#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "fracmap_test_cli";

int run(const std::string& args) {
  const std::string cmd = std::string(FRACMAP_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path config(const std::string& name, const std::string& body) {
  fs::create_directories(kRoot);
  const fs::path p = kRoot / name;
  std::ofstream(p) << body;
  return p;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run("") == 2);
  CHECK(run("bogus") == 2);
  CHECK(run("verify-kernel --samples abc") == 2);
  CHECK(run("verify-kernel --epsilon 1.5 --out " + (kRoot / "e").string()) == 2);
  CHECK(run("verify-kernel --epsilon 0 --out " + (kRoot / "e").string()) == 2);
  CHECK(run("verify-frame --config " + config("n6.json", "{\"N\": 6}").string()) == 2);
  CHECK(run("verify-commutator --samples 0") == 2);
  CHECK(run("flow --out " + (kRoot / "e").string()) == 2);
  CHECK(run("flow --config " + config("bad.json", "{\"pbar\": ").string()) == 2);
  CHECK(run("verify-frame --config " + (kRoot / "missing.json").string()) == 2);
  CHECK(run("--help") == 0);
}

TEST_CASE("verify-frame report") {
  const fs::path out = kRoot / "frame";
  REQUIRE(run("verify-frame --seed 4 --out " + out.string()) == 0);
  const auto j = nlohmann::json::parse(slurp(out / "report.json"));
  CHECK(j["command"] == "verify-frame");
  CHECK(j["seed"] == 4);
  CHECK(j["results"]["omega_count"] == 3);
  CHECK(j["results"]["paper_theta"] == 0.25);
  CHECK(j["results"]["meets_c_proof"] == true);
  CHECK(fs::exists(out / "tables" / "frame.csv"));
}

TEST_CASE("reports are reproducible and flags override the config file") {
  const fs::path cfg = config("kernel.json", "{\"alphas\": [0.3, 0.6], \"samples\": 2000, \"seed\": 8}");
  const fs::path a = kRoot / "ka", b = kRoot / "kb", c = kRoot / "kc";
  REQUIRE(run("verify-kernel --config " + cfg.string() + " --samples 3000 --out " + a.string()) == 0);
  REQUIRE(run("verify-kernel --config " + cfg.string() + " --samples 3000 --out " + b.string()) == 0);
  REQUIRE(run("verify-kernel --config " + cfg.string() + " --samples 3000 --seed 9 --out " + c.string()) == 0);
  const std::string ra = slurp(a / "report.json");
  CHECK(ra == slurp(b / "report.json"));
  CHECK(ra != slurp(c / "report.json"));

  const auto j = nlohmann::json::parse(ra);
  CHECK(j["config"]["samples"] == 3000);
  CHECK(j["config"]["seed"] == 8);
  CHECK(j["results"]["runs"].size() == 2);
  CHECK(j["results"]["runs"][0]["epsilon"].get<double>() == doctest::Approx(0.21));
  CHECK(j["input_hash"].get<std::string>().size() == 40);
  CHECK(fs::exists(a / "tables" / "kernel.csv"));
  CHECK(fs::exists(a / "plots" / "kernel_constants.svg"));
}

TEST_CASE("flow writes fields, tables and plots") {
  const fs::path out = kRoot / "flow";
  REQUIRE(run("flow --pbar 2 --grid 128 --seed 3 --out " + out.string()) == 0);
  for (const char* f : {"report.json", "fields/u_final.bin", "fields/u_final.json", "fields/u_initial.bin",
                        "tables/energy_trace.csv", "tables/growth.csv", "tables/subcritical.csv",
                        "plots/energy_trace.svg", "plots/growth.svg"})
    CHECK(fs::exists(out / f));
  const auto j = nlohmann::json::parse(slurp(out / "report.json"));
  CHECK(j["results"]["descent"]["converged"] == true);

  const fs::path h = kRoot / "holder";
  REQUIRE(run("holder-report --config " + config("h.json", "{\"field\": \"" + (out / "fields" / "u_final").string() + "\"}").string() +
              " --out " + h.string()) == 0);
  const auto hj = nlohmann::json::parse(slurp(h / "report.json"));
  CHECK(hj["results"]["holder"]["gamma_defined"] == true);
}

TEST_CASE("flow that cannot converge exits with 1") {
  const fs::path cfg = config("short.json", "{\"max_iters\": 3}");
  CHECK(run("flow --pbar 2 --grid 128 --config " + cfg.string() + " --out " + (kRoot / "short").string()) == 1);
}
