#include "ablab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "ablab/errors.hpp"

namespace ablab {

namespace {

enum class Type { Number, Int, String, Bool, NumberList, StringList };

struct KeyInfo {
  const char* key;
  Type type;
};

constexpr KeyInfo kKeys[] = {
    {"law.kind", Type::String},           {"law.gamma", Type::Number},
    {"law.epsilon", Type::Number},        {"law.table", Type::String},
    {"law.p_max", Type::Number},          {"growth.kind", Type::String},
    {"growth.rate", Type::Number},        {"growth.p_max", Type::Number},
    {"grid.dim", Type::Int},              {"grid.extent", Type::Number},
    {"grid.cells", Type::Int},            {"grid.boundary", Type::String},
    {"initial.kind", Type::String},       {"initial.t0", Type::Number},
    {"initial.c0", Type::Number},         {"initial.center", Type::Number},
    {"initial.radius", Type::Number},     {"initial.height", Type::Number},
    {"initial.path", Type::String},       {"run.t_end", Type::Number},
    {"run.snapshot_count", Type::Int},    {"run.cfl_safety", Type::Number},
    {"run.backend", Type::String},        {"run.dump_snapshots", Type::Bool},
    {"run.output_dir", Type::String},     {"checks.theorems", Type::StringList},
    {"checks.mask_threshold", Type::Number}, {"checks.mask_margin", Type::Int},
    {"checks.tolerance", Type::Number},   {"checks.warmup", Type::Number},
    {"checks.bound_scale", Type::Number}, {"checks.branch", Type::String},
    {"checks.l2_weight", Type::NumberList}, {"sweep.parameter", Type::String},
    {"sweep.values", Type::NumberList},   {"sweep.parallelism", Type::Int},
};

const std::set<std::string> kTheoremIds = {"L1_NO_G",      "L1_WITH_G",    "LINF_SPECIAL",
                                           "LINF_NO_G_B1", "LINF_NO_G_B2", "LINF_WITH_G",
                                           "L2_NO_G",      "L2_WEIGHTED",  "L2_WITH_G"};

struct Entry {
  std::string raw;
  int line = 0;
};
using Document = std::map<std::string, Entry>;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Drops a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

std::vector<std::string> section_names() {
  std::vector<std::string> out;
  for (const auto& k : kKeys) {
    std::string s(k.key);
    s = s.substr(0, s.find('.'));
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  }
  return out;
}

std::string nearest(const std::string& word, const std::vector<std::string>& candidates) {
  std::string best;
  std::size_t best_d = std::string::npos;
  for (const auto& c : candidates) {
    const std::size_t d = edit_distance(word, c);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

[[noreturn]] void unknown_key(const std::string& key, int line) {
  std::vector<std::string> candidates = known_config_keys();
  for (const auto& s : section_names()) candidates.push_back(s);
  // Compare against the bare key too, so "gama" under [law] finds law.gamma.
  std::string best = nearest(key, candidates);
  throw ConfigError(key, line, "is not a valid key; nearest valid key: " + best);
}

const KeyInfo* find_key(const std::string& key) {
  for (const auto& k : kKeys) {
    if (key == k.key) return &k;
  }
  return nullptr;
}

Document parse_document(const std::string& text) {
  Document doc;
  std::istringstream in(text);
  std::string raw_line;
  std::string section;
  const auto sections = section_names();
  int line_no = 0;
  while (std::getline(in, raw_line)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw_line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("", line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (std::find(sections.begin(), sections.end(), section) == sections.end()) {
        throw ConfigError(section, line_no,
                          "is not a valid section; nearest valid section: " +
                              nearest(section, sections));
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("", line_no, "expected key = value");
    const std::string bare = trim(line.substr(0, eq));
    const std::string key = section.empty() ? bare : section + "." + bare;
    if (!find_key(key)) unknown_key(key, line_no);
    if (doc.count(key)) throw ConfigError(key, line_no, "is set twice");
    doc[key] = Entry{trim(line.substr(eq + 1)), line_no};
  }
  return doc;
}

void apply_overrides(Document& doc, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw ConfigError(o, 0, "override must be key=value");
    const std::string key = trim(o.substr(0, eq));
    if (!find_key(key)) unknown_key(key, 0);
    doc[key] = Entry{trim(o.substr(eq + 1)), 0};
  }
}

class Reader {
 public:
  explicit Reader(const Document& doc) : doc_(doc) {}

  bool has(const std::string& key) const { return doc_.count(key) > 0; }
  int line(const std::string& key) const { return has(key) ? doc_.at(key).line : 0; }

  double number(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    return parse_number(key, unquote(doc_.at(key).raw));
  }
  double required_number(const std::string& key) const {
    require(key);
    return number(key, 0.0);
  }
  int integer(const std::string& key, int fallback) const {
    if (!has(key)) return fallback;
    const double v = number(key, 0.0);
    if (v != std::floor(v) || std::abs(v) > 1e9) {
      throw ConfigError(key, line(key), "expects an integer, got '" + doc_.at(key).raw + "'");
    }
    return static_cast<int>(v);
  }
  std::string string(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    return unquote(doc_.at(key).raw);
  }
  std::string required_string(const std::string& key) const {
    require(key);
    return string(key, "");
  }
  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string v = unquote(doc_.at(key).raw);
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError(key, line(key), "expects true or false, got '" + v + "'");
  }
  std::vector<std::string> list(const std::string& key) const {
    if (!has(key)) return {};
    std::string v = trim(doc_.at(key).raw);
    if (v.size() < 2 || v.front() != '[' || v.back() != ']') {
      throw ConfigError(key, line(key), "expects a list like [a, b]");
    }
    v = v.substr(1, v.size() - 2);
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = unquote(trim(item));
      if (!item.empty()) out.push_back(item);
    }
    return out;
  }
  std::vector<double> number_list(const std::string& key) const {
    std::vector<double> out;
    for (const auto& s : list(key)) out.push_back(parse_number(key, s));
    return out;
  }

  void require(const std::string& key) const {
    if (!has(key)) throw ConfigError(key, 0, "is required");
  }

 private:
  static std::string unquote(const std::string& s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
    return s;
  }
  double parse_number(const std::string& key, const std::string& s) const {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != s.size() || !std::isfinite(v)) {
      throw ConfigError(key, line(key), "expects a number, got '" + s + "'");
    }
    return v;
  }

  const Document& doc_;
};

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

void check(bool ok, const Reader& r, const std::string& key, const std::string& message) {
  if (!ok) throw ConfigError(key, r.line(key), message);
}

ScenarioConfig build_scenario(const Reader& r) {
  ScenarioConfig c;

  c.law.kind = r.required_string("law.kind");
  check(c.law.kind == "power-law" || c.law.kind == "dhv" || c.law.kind == "tabulated", r,
        "law.kind", "must be one of power-law, dhv, tabulated");
  if (c.law.kind == "power-law") {
    c.law.gamma = r.required_number("law.gamma");
    check(c.law.gamma > 0.0, r, "law.gamma", "must be positive");
  } else if (c.law.kind == "dhv") {
    c.law.epsilon = r.required_number("law.epsilon");
    check(c.law.epsilon > 0.0, r, "law.epsilon", "must be positive");
  } else {
    c.law.table = r.required_string("law.table");
    check(std::filesystem::exists(c.law.table), r, "law.table",
          "file not found: " + c.law.table);
  }
  if (r.has("law.p_max")) {
    c.law.p_max = r.number("law.p_max", 1.0);
    check(*c.law.p_max > 0.0, r, "law.p_max", "must be positive");
  }

  c.growth.kind = r.string("growth.kind", "zero");
  check(c.growth.kind == "zero" || c.growth.kind == "linear", r, "growth.kind",
        "must be zero or linear");
  if (c.growth.kind == "linear") {
    c.growth.rate = r.required_number("growth.rate");
    c.growth.p_max = r.required_number("growth.p_max");
  } else {
    c.growth.rate = r.number("growth.rate", 0.0);
    c.growth.p_max = r.number("growth.p_max", 1.0);
  }
  check(c.growth.kind == "zero" || c.growth.rate > 0.0, r, "growth.rate", "must be positive");
  check(c.growth.p_max > 0.0, r, "growth.p_max", "must be positive");

  const int dim = r.integer("grid.dim", 1);
  check(dim == 1 || dim == 2, r, "grid.dim", "must be 1 or 2");
  const double extent = r.number("grid.extent", 10.0);
  check(extent > 0.0, r, "grid.extent", "must be positive");
  const int cells = r.integer("grid.cells", 256);
  check(cells >= 8 && is_power_of_two(cells), r, "grid.cells",
        "must be a power of two and at least 8");
  check(dim == 1 || cells <= 256, r, "grid.cells", "2D runs are limited to 256 cells per axis");
  const std::string boundary = r.string("grid.boundary", "no-flux");
  check(boundary == "periodic" || boundary == "no-flux", r, "grid.boundary",
        "must be periodic or no-flux");
  c.grid = Grid(dim, extent, cells, boundary == "periodic" ? Boundary::Periodic : Boundary::NoFlux);
  check(dim == 1 || c.law.kind == "power-law", r, "grid.dim",
        "2D runs are supported for power-law scenarios only");

  const std::string init = r.required_string("initial.kind");
  if (init == "barenblatt") {
    c.initial.kind = InitialKind::Barenblatt;
    check(c.law.kind == "power-law", r, "initial.kind",
          "barenblatt data needs a power-law pressure");
  } else if (init == "cos-squared") {
    c.initial.kind = InitialKind::CosSquared;
  } else if (init == "bump") {
    c.initial.kind = InitialKind::Bump;
  } else if (init == "csv") {
    c.initial.kind = InitialKind::FromCSV;
    c.initial.path = r.required_string("initial.path");
    check(std::filesystem::exists(c.initial.path), r, "initial.path",
          "file not found: " + c.initial.path);
  } else {
    throw ConfigError("initial.kind", r.line("initial.kind"),
                      "must be one of barenblatt, cos-squared, bump, csv");
  }
  c.initial.t0 = r.number("initial.t0", 1.0);
  check(c.initial.t0 > 0.0, r, "initial.t0", "must be positive");
  c.initial.c0 = r.number("initial.c0", 1.0);
  check(c.initial.c0 > 0.0, r, "initial.c0", "must be positive");
  c.initial.center = r.number("initial.center", 0.5);
  check(c.initial.center >= 0.0 && c.initial.center <= 1.0, r, "initial.center",
        "must lie in [0, 1] (fraction of the extent)");
  c.initial.radius = r.number("initial.radius", 1.0);
  check(c.initial.radius > 0.0, r, "initial.radius", "must be positive");
  c.initial.height = r.number("initial.height", 1.0);
  check(c.initial.height > 0.0, r, "initial.height", "must be positive");
  check(c.law.kind != "dhv" || c.initial.kind != InitialKind::Bump || c.initial.height < 1.0, r,
        "initial.height", "must be below 1 for the dhv law");

  c.t_end = r.required_number("run.t_end");
  check(c.t_end >= c.start_time(), r, "run.t_end",
        "must not precede the start time of the run");
  c.snapshot_count = r.integer("run.snapshot_count", 50);
  check(c.snapshot_count >= 2, r, "run.snapshot_count", "must be at least 2");
  c.cfl_safety = r.number("run.cfl_safety", 0.45);
  check(c.cfl_safety > 0.0 && c.cfl_safety <= 0.5, r, "run.cfl_safety", "must lie in (0, 0.5]");
  const std::string backend = r.string("run.backend", "serial");
  check(backend == "serial" || backend == "openmp", r, "run.backend",
        "must be serial or openmp");
  c.backend = backend == "openmp" ? kernels::Backend::OpenMP : kernels::Backend::Serial;
  c.dump_snapshots = r.boolean("run.dump_snapshots", false);
  c.output_dir = r.string("run.output_dir", "ablab-out");

  c.mask_threshold = r.number("checks.mask_threshold", 1e-6);
  check(c.mask_threshold >= 0.0 && c.mask_threshold < 1.0, r, "checks.mask_threshold",
        "must lie in [0, 1)");
  c.mask_margin = r.integer("checks.mask_margin", 8);
  check(c.mask_margin >= 0, r, "checks.mask_margin", "must be nonnegative");
  c.tolerance = r.number("checks.tolerance", 0.1);
  check(c.tolerance >= 0.0, r, "checks.tolerance", "must be nonnegative");
  c.warmup = r.number("checks.warmup", 0.05);
  check(c.warmup >= 0.0 && c.warmup < 1.0, r, "checks.warmup", "must lie in [0, 1)");
  c.bound_scale = r.number("checks.bound_scale", 1.0);
  check(c.bound_scale > 0.0, r, "checks.bound_scale", "must be positive");
  const std::string branch = r.string("checks.branch", "auto");
  check(branch == "auto" || branch == "ratio" || branch == "ode", r, "checks.branch",
        "must be auto, ratio or ode");
  c.branch = branch == "ratio" ? BranchChoice::Ratio
             : branch == "ode" ? BranchChoice::ODE
                               : BranchChoice::Auto;
  if (r.has("checks.l2_weight")) {
    c.l2_weight = r.number_list("checks.l2_weight");
    check(!c.l2_weight.empty(), r, "checks.l2_weight", "must not be empty");
  }
  c.theorems = r.list("checks.theorems");
  for (const auto& id : c.theorems) {
    check(kTheoremIds.count(id) > 0, r, "checks.theorems", "unknown theorem id '" + id + "'");
  }
  return c;
}

Document read_and_override(const std::string& text, const std::vector<std::string>& overrides) {
  Document doc = parse_document(text);
  apply_overrides(doc, overrides);
  return doc;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", 0, "cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

const std::vector<std::string>& known_config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& k : kKeys) out.emplace_back(k.key);
    return out;
  }();
  return keys;
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

ScenarioConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
  const Document doc = read_and_override(text, overrides);
  return build_scenario(Reader(doc));
}

SweepConfig parse_sweep_config(const std::string& text,
                               const std::vector<std::string>& overrides) {
  const Document doc = read_and_override(text, overrides);
  const Reader r(doc);
  SweepConfig s;
  s.base = build_scenario(r);
  s.parameter = r.required_string("sweep.parameter");
  check(s.parameter == "gamma" || s.parameter == "epsilon" || s.parameter == "cells", r,
        "sweep.parameter", "must be gamma, epsilon or cells");
  r.require("sweep.values");
  s.values = r.number_list("sweep.values");
  check(s.values.size() >= 3, r, "sweep.values", "needs at least 3 values");
  const bool up = s.values[1] > s.values[0];
  for (std::size_t i = 1; i < s.values.size(); ++i) {
    check(up ? s.values[i] > s.values[i - 1] : s.values[i] < s.values[i - 1], r, "sweep.values",
          "must be strictly monotone");
  }
  for (double v : s.values) {
    check(v > 0.0, r, "sweep.values", "must be positive");
    if (s.parameter == "cells") {
      check(v == std::floor(v) && is_power_of_two(static_cast<int>(v)) && v >= 8, r,
            "sweep.values", "cells must be powers of two and at least 8");
    }
  }
  check(s.parameter != "gamma" || s.base.law.kind == "power-law", r, "sweep.parameter",
        "gamma sweeps need a power-law base scenario");
  check(s.parameter != "epsilon" || s.base.law.kind == "dhv", r, "sweep.parameter",
        "epsilon sweeps need a dhv base scenario");
  s.parallelism = r.integer("sweep.parallelism", 1);
  check(s.parallelism >= 1, r, "sweep.parallelism", "must be at least 1");
  return s;
}

ScenarioConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  return parse_config(read_file(path), overrides);
}

SweepConfig load_sweep_config(const std::string& path,
                              const std::vector<std::string>& overrides) {
  return parse_sweep_config(read_file(path), overrides);
}

PressureLaw make_law(const ScenarioConfig& c) {
  if (c.law.kind == "power-law") {
    return PressureLaw::power_law(c.law.gamma, c.law.p_max.value_or(c.growth.p_max));
  }
  if (c.law.kind == "dhv") {
    return PressureLaw::dhv(c.law.epsilon, c.law.p_max.value_or(c.growth.p_max));
  }
  std::ifstream in(c.law.table);
  if (!in) throw ConfigError("law.table", 0, "cannot open " + c.law.table);
  std::string line;
  std::getline(in, line);  // header
  std::vector<double> p, q;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    std::stringstream ss(line);
    std::string a, b;
    std::getline(ss, a, ',');
    std::getline(ss, b, ',');
    try {
      p.push_back(std::stod(a));
      q.push_back(std::stod(b));
    } catch (const std::exception&) {
      throw ConfigError("law.table", row, "malformed row '" + line + "'");
    }
  }
  return PressureLaw::tabulated(std::move(p), std::move(q));
}

GrowthLaw make_growth(const ScenarioConfig& c) {
  if (c.growth.kind == "linear") return GrowthLaw::linear(c.growth.rate, c.growth.p_max);
  return GrowthLaw::zero(c.growth.p_max);
}

}  // namespace ablab
