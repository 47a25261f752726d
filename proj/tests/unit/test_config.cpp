#include <doctest.h>

#include <string>

#include "ablab/config.hpp"
#include "ablab/errors.hpp"

using namespace ablab;

namespace {

const std::string kMinimal = R"(
[law]
kind = "power-law"
gamma = 2
[initial]
kind = "bump"
[run]
t_end = 1
)";

std::string error_of(const std::string& text, const std::vector<std::string>& overrides = {}) {
  try {
    parse_config(text, overrides);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("defaults") {
  const auto c = parse_config(kMinimal);
  CHECK(c.cfl_safety == 0.45);
  CHECK(c.mask_threshold == 1e-6);
  CHECK(c.snapshot_count == 50);
  CHECK(c.grid.cells == 256);
  CHECK(c.grid.boundary == Boundary::NoFlux);
  CHECK(c.initial.kind == InitialKind::Bump);
  CHECK(c.theorems.empty());
}

TEST_CASE("validation names key and line") {
  std::string bad = kMinimal;
  bad.replace(bad.find("gamma = 2"), 9, "gamma = -1");
  const std::string e = error_of(bad);
  CHECK(e.find("law.gamma must be positive") != std::string::npos);
  CHECK(e.find("line 4") != std::string::npos);
  CHECK(error_of(kMinimal, {"grid.cells=100"}).find("power of two") != std::string::npos);
  CHECK(error_of(kMinimal, {"run.snapshot_count=1"}).find("at least 2") != std::string::npos);
  CHECK(error_of(kMinimal, {"checks.theorems=[\"LINF_BOGUS\"]"}) != "");
  CHECK(error_of(kMinimal, {"run.t_end=abc"}).find("expects a number") != std::string::npos);
}

TEST_CASE("unknown keys suggest the nearest valid key") {
  CHECK(error_of("lawx = 1\n" + kMinimal).find("nearest valid key: law") != std::string::npos);
  CHECK(error_of("[lawx]\n").find("nearest valid section: law") != std::string::npos);
  CHECK(error_of(kMinimal, {"law.gama=2"}).find("law.gamma") != std::string::npos);
}

TEST_CASE("required keys and missing files") {
  CHECK(error_of("[law]\nkind = \"power-law\"\n").find("is required") != std::string::npos);
  CHECK(error_of(kMinimal, {"initial.kind=\"csv\"", "initial.path=\"/no/such/file.csv\""})
            .find("file not found") != std::string::npos);
}

TEST_CASE("overrides apply on top of the document") {
  const auto c = parse_config(kMinimal, {"law.gamma=5", "checks.theorems=[\"L1_NO_G\", \"LINF_SPECIAL\"]"});
  CHECK(c.law.gamma == 5.0);
  CHECK(c.theorems == std::vector<std::string>{"L1_NO_G", "LINF_SPECIAL"});
}

TEST_CASE("sweep configs") {
  const std::string sweep = kMinimal + "[sweep]\nparameter = \"gamma\"\nvalues = [5, 10, 20, 40]\nparallelism = 2\n";
  const auto s = parse_sweep_config(sweep);
  CHECK(s.parameter == "gamma");
  CHECK(s.values.size() == 4);
  CHECK(s.parallelism == 2);
  CHECK_THROWS_AS(parse_sweep_config(sweep, {"sweep.values=[5, 10]"}), ConfigError);
  CHECK_THROWS_AS(parse_sweep_config(sweep, {"sweep.values=[5, 20, 10]"}), ConfigError);
  CHECK_THROWS_AS(parse_sweep_config(sweep, {"sweep.parameter=\"epsilon\""}), ConfigError);
}

TEST_CASE("edit distance") {
  CHECK(edit_distance("kitten", "sitting") == 3);
  CHECK(edit_distance("", "abc") == 3);
  CHECK(edit_distance("law", "law") == 0);
}

}  // TEST_SUITE
