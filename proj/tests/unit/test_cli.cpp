#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ablab/cli.hpp"

namespace fs = std::filesystem;
using namespace ablab;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ablab_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int call(std::vector<std::string> args) {
  args.insert(args.begin(), "ablab");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

const char* kBarenblatt = R"([law]
kind = "power-law"
gamma = 2
[grid]
cells = 128
[initial]
kind = "barenblatt"
[run]
t_end = 2
snapshot_count = 10
[checks]
theorems = ["LINF_NO_G_B1"]
)";

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "scenario.toml";
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("run: exit codes and outputs") {
  const fs::path dir = scratch("run");
  const fs::path cfg = write_config(dir, kBarenblatt);
  CHECK(call({"run", cfg.string(), "-o", (dir / "ok").string(), "--set", "run.dump_snapshots=true"}) ==
        kExitPass);
  CHECK(fs::exists(dir / "ok" / "diagnostics.csv"));
  CHECK(fs::exists(dir / "ok" / "summary.txt"));
  CHECK(fs::exists(dir / "ok" / "bound_LINF_NO_G_B1.csv"));
  CHECK(slurp(dir / "ok" / "plot_LINF_NO_G_B1.svg").rfind("<svg", 0) == 0);
  CHECK(fs::exists(dir / "ok" / "snapshots" / "snapshot_t000002000000.csv"));

  CHECK(call({"run", cfg.string(), "-o", (dir / "bad").string(), "--set", "checks.bound_scale=0.1"}) ==
        kExitViolation);
  CHECK(call({"run", cfg.string(), "--set", "law.gamma=-1"}) == kExitError);
  CHECK(call({"run", (dir / "missing.toml").string()}) == kExitError);
  CHECK(call({"run", cfg.string(), "-o", (dir / "hyp").string(), "--set", "growth.kind=\"linear\"",
              "--set", "growth.rate=1", "--set", "growth.p_max=1", "--set",
              "checks.theorems=[\"L1_NO_G\"]"}) == kExitError);
}

TEST_CASE("run: diagnostics are byte-identical across runs") {
  const fs::path dir = scratch("determinism");
  const fs::path cfg = write_config(dir, kBarenblatt);
  REQUIRE(call({"run", cfg.string(), "-o", (dir / "a").string()}) == kExitPass);
  REQUIRE(call({"run", cfg.string(), "-o", (dir / "b").string(), "--set", "run.backend=\"openmp\""}) ==
          kExitPass);
  CHECK(slurp(dir / "a" / "diagnostics.csv") == slurp(dir / "b" / "diagnostics.csv"));
}

TEST_CASE("output directory from the environment") {
  const fs::path dir = scratch("env");
  const fs::path cfg = write_config(dir, kBarenblatt);
  setenv("AB_LAB_OUTPUT", (dir / "from_env").string().c_str(), 1);
  const int code = call({"run", cfg.string()});
  unsetenv("AB_LAB_OUTPUT");
  CHECK(code == kExitPass);
  CHECK(fs::exists(dir / "from_env" / "diagnostics.csv"));
}

TEST_CASE("sweep: parallel matches serial") {
  const fs::path dir = scratch("sweep");
  const std::string text = std::string(kBarenblatt) +
                           "[sweep]\nparameter = \"gamma\"\nvalues = [1.5, 2, 3]\nparallelism = 1\n";
  const fs::path cfg = write_config(dir, text);
  REQUIRE(call({"sweep", cfg.string(), "-o", (dir / "serial").string()}) == kExitPass);
  REQUIRE(call({"sweep", cfg.string(), "-o", (dir / "parallel").string(), "--set",
                "sweep.parallelism=3"}) == kExitPass);
  const std::string a = slurp(dir / "serial" / "sweep_summary.csv");
  CHECK(a == slurp(dir / "parallel" / "sweep_summary.csv"));
  CHECK(a.rfind("gamma,", 0) == 0);
}

TEST_CASE("reference dumps and weights") {
  const fs::path dir = scratch("dumps");
  CHECK(call({"barenblatt", "--cells", "64", "-o", dir.string()}) == kExitPass);
  CHECK(slurp(dir / "barenblatt.csv").rfind("cell_index,x,n,p", 0) == 0);
  CHECK(call({"verify-weights", "--law", "dhv", "--epsilon", "0.5", "--growth-rate", "1", "-o",
              dir.string()}) == kExitPass);
  const std::string w = slurp(dir / "weights.csv");
  CHECK(w.rfind("family,p,h,h_prime,h_second,alpha,beta_residual,delta", 0) == 0);
  CHECK(slurp(dir / "weights_summary.json").find("\"delta1_bar\"") != std::string::npos);
  CHECK(call({"report", (dir / "nope").string()}) == kExitError);
}

TEST_CASE("report regenerates plots") {
  const fs::path dir = scratch("report");
  const fs::path cfg = write_config(dir, kBarenblatt);
  REQUIRE(call({"run", cfg.string(), "-o", (dir / "r").string()}) == kExitPass);
  fs::remove(dir / "r" / "plot_LINF_NO_G_B1.svg");
  CHECK(call({"report", (dir / "r").string()}) == kExitPass);
  CHECK(fs::exists(dir / "r" / "plot_LINF_NO_G_B1.svg"));
}

TEST_CASE("usage errors") {
  CHECK(call({}) == kExitError);
  CHECK(call({"frobnicate"}) == kExitError);
  CHECK(call({"--help"}) == kExitPass);
  CHECK(call({"aronson", "--cells", "100"}) == kExitError);
}

}  // TEST_SUITE
