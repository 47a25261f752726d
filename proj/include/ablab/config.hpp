#ifndef ABLAB_CONFIG_HPP
#define ABLAB_CONFIG_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ablab/grid.hpp"
#include "ablab/growth_law.hpp"
#include "ablab/kernels.hpp"
#include "ablab/pressure_law.hpp"

namespace ablab {

enum class InitialKind { Barenblatt, CosSquared, Bump, FromCSV };
enum class BranchChoice { Auto, Ratio, ODE };

struct LawSpec {
  std::string kind = "power-law";  // power-law | dhv | tabulated
  double gamma = 2.0;
  double epsilon = 1.0;
  std::string table;  // CSV with columns p,q for tabulated laws
  std::optional<double> p_max;
};

struct GrowthSpec {
  std::string kind = "zero";  // zero | linear
  double rate = 1.0;
  double p_max = 1.0;
};

struct InitialSpec {
  InitialKind kind = InitialKind::Bump;
  double t0 = 1.0;       // Barenblatt start time
  double c0 = 1.0;       // Barenblatt constant
  double center = 0.5;   // bump centre as a fraction of the extent
  double radius = 1.0;
  double height = 1.0;
  std::string path;
};

struct ScenarioConfig {
  LawSpec law;
  GrowthSpec growth;
  Grid grid{1, 10.0, 256, Boundary::NoFlux};
  InitialSpec initial;
  double t_end = 1.0;
  int snapshot_count = 50;
  double cfl_safety = 0.45;
  kernels::Backend backend = kernels::Backend::Serial;
  bool dump_snapshots = false;
  std::string output_dir = "ablab-out";

  double mask_threshold = 1e-6;
  int mask_margin = 8;
  double tolerance = 0.1;
  double warmup = 0.05;
  double bound_scale = 1.0;
  BranchChoice branch = BranchChoice::Auto;
  std::vector<double> l2_weight = {1.0};  // polynomial coefficients of h for L2_WEIGHTED
  std::vector<std::string> theorems;

  /// Time the run starts at: t0 for Barenblatt data, 0 otherwise.
  double start_time() const { return initial.kind == InitialKind::Barenblatt ? initial.t0 : 0.0; }
};

struct SweepConfig {
  ScenarioConfig base;
  std::string parameter;  // gamma | epsilon | cells
  std::vector<double> values;
  int parallelism = 1;
};

/// Parses the sectioned key = value document (see docs/config.md). Unknown
/// keys, type mismatches and constraint violations raise ConfigError carrying
/// the key path and line. `overrides` are "section.key=value" strings applied
/// on top of the document.
ScenarioConfig parse_config(const std::string& text,
                            const std::vector<std::string>& overrides = {});
SweepConfig parse_sweep_config(const std::string& text,
                               const std::vector<std::string>& overrides = {});
ScenarioConfig load_config(const std::string& path,
                           const std::vector<std::string>& overrides = {});
SweepConfig load_sweep_config(const std::string& path,
                              const std::vector<std::string>& overrides = {});

/// Builds the law/growth objects the config describes.
PressureLaw make_law(const ScenarioConfig& config);
GrowthLaw make_growth(const ScenarioConfig& config);

/// All valid dotted keys, for help text and nearest-key suggestions.
const std::vector<std::string>& known_config_keys();

/// Levenshtein distance.
std::size_t edit_distance(const std::string& a, const std::string& b);

}  // namespace ablab

#endif  // ABLAB_CONFIG_HPP
