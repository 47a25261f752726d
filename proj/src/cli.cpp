#include "ablab/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "ablab/errors.hpp"
#include "ablab/oracles.hpp"
#include "ablab/report.hpp"
#include "ablab/weights.hpp"

namespace fs = std::filesystem;

namespace ablab {

RunOutcome run_scenario(const ScenarioConfig& config, const SnapshotObserver& observer) {
  const PressureLaw law = make_law(config);
  const GrowthLaw growth = make_growth(config);
  TheoremMonitor monitor(config, law, growth);
  RunOutcome out;
  out.result = simulate(config, [&](const Snapshot& s) {
    monitor.observe(s);
    if (observer) observer(s);
  });
  out.theorems = monitor.finish();
  return out;
}

ScenarioConfig sweep_point(const SweepConfig& sweep, double value) {
  ScenarioConfig c = sweep.base;
  if (sweep.parameter == "gamma") {
    c.law.gamma = value;
  } else if (sweep.parameter == "epsilon") {
    c.law.epsilon = value;
  } else if (sweep.parameter == "cells") {
    c.grid = Grid(c.grid.dim, c.grid.extent, static_cast<int>(value), c.grid.boundary);
  } else {
    throw ConfigError("sweep.parameter", 0, "unknown sweep parameter '" + sweep.parameter + "'");
  }
  return c;
}

std::vector<SweepRow> run_sweep(const SweepConfig& sweep) {
  std::vector<SweepRow> rows(sweep.values.size());
  std::vector<std::exception_ptr> errors(sweep.values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      try {
        rows[i].value = sweep.values[i];
        rows[i].outcome = run_scenario(sweep_point(sweep, sweep.values[i]));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n_workers =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(sweep.parallelism, 1)), rows.size());
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < n_workers; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::sort(rows.begin(), rows.end(),
            [](const SweepRow& a, const SweepRow& b) { return a.value < b.value; });
  return rows;
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

fs::path output_dir(const std::string& configured, const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("AB_LAB_OUTPUT"); env && *env) return env;
  return configured;
}

void write_run_outputs(const fs::path& dir, const RunOutcome& out) {
  fs::create_directories(dir);
  {
    std::ofstream csv(dir / "diagnostics.csv");
    out.result.diagnostics.write_csv(csv);
  }
  for (const auto& t : out.theorems) {
    std::ofstream csv(dir / ("bound_" + t.id + ".csv"));
    write_bound_report_csv(csv, t.report);
    write_text(dir / ("plot_" + t.id + ".svg"), svg_bound_plot(t));
  }
  write_text(dir / "summary.txt", summary_text(out.theorems));
}

int verdict(const std::vector<TheoremOutcome>& outcomes) {
  return all_passed(outcomes) ? kExitPass : kExitViolation;
}

// --- run ---------------------------------------------------------------

struct RunArgs {
  std::string config;
  std::vector<std::string> overrides;
  std::string output;
};

int cmd_run(const RunArgs& a) {
  const ScenarioConfig config = load_config(a.config, a.overrides);
  const fs::path dir = output_dir(config.output_dir, a.output);
  fs::create_directories(dir);
  SnapshotObserver dump;
  if (config.dump_snapshots) {
    fs::create_directories(dir / "snapshots");
    dump = [&](const Snapshot& s) {
      std::ofstream csv(dir / "snapshots" / snapshot_filename(s.time));
      write_snapshot_csv(csv, s);
    };
  }
  const RunOutcome out = run_scenario(config, dump);
  write_run_outputs(dir, out);
  std::cout << summary_text(out.theorems);
  std::cout << "steps = " << out.result.steps << ", outputs in " << dir.string() << "\n";
  return verdict(out.theorems);
}

// --- sweep / hele-shaw ---------------------------------------------------

struct SweepArgs {
  std::string config;
  std::vector<std::string> overrides;
  std::string output;
};

int cmd_sweep(const SweepArgs& a, bool hele_shaw) {
  const SweepConfig sweep = load_sweep_config(a.config, a.overrides);
  if (hele_shaw && sweep.parameter == "cells") {
    throw ConfigError("sweep.parameter", 0, "hele-shaw sweeps gamma or epsilon");
  }
  const fs::path dir = output_dir(sweep.base.output_dir, a.output);
  fs::create_directories(dir);
  const auto rows = run_sweep(sweep);

  std::ofstream csv(dir / (hele_shaw ? "complementarity.csv" : "sweep_summary.csv"));
  csv << sweep.parameter << ",steps,final_time,mass,min_w,r1,r2";
  std::vector<std::string> ids = sweep.base.theorems;
  for (const auto& id : ids) csv << ',' << id << "_worst_margin," << id << "_passed";
  csv << '\n';
  bool ok = true;
  for (const auto& row : rows) {
    const auto& d = row.outcome.result.diagnostics;
    csv << format_double(row.value) << ',' << row.outcome.result.steps << ','
        << format_double(d.times.back()) << ',' << format_double(d.mass.back()) << ','
        << format_double(d.min_w.back()) << ',' << format_double(d.complementarity_r1.back())
        << ',' << format_double(d.complementarity_r2.back());
    for (const auto& t : row.outcome.theorems) {
      csv << ',' << format_double(t.report.worst_margin) << ',' << (t.report.passed ? 1 : 0);
    }
    csv << '\n';
    ok = ok && row.outcome.passed();
    std::cout << sweep.parameter << " = " << format_double(row.value)
              << ": r1 = " << format_double(d.complementarity_r1.back())
              << ", r2 = " << format_double(d.complementarity_r2.back())
              << (row.outcome.passed() ? "" : "  (bound violated)") << "\n";
  }
  if (hele_shaw) {
    PlotSeries r1{"r1 = |p (Laplace p + G)|_1", {}, {}, false};
    PlotSeries r2{"r2 = |p (n - 1)|_1", {}, {}, true};
    for (const auto& row : rows) {
      r1.x.push_back(row.value);
      r1.y.push_back(row.outcome.result.diagnostics.complementarity_r1.back());
      r2.x.push_back(row.value);
      r2.y.push_back(row.outcome.result.diagnostics.complementarity_r2.back());
    }
    write_text(dir / "complementarity.svg",
               svg_loglog("complementarity residuals", sweep.parameter, "residual", {r1, r2}));
  }
  return ok ? kExitPass : kExitViolation;
}

// --- verify-weights ------------------------------------------------------

struct WeightArgs {
  std::string law = "power-law";
  double gamma = 2.0;
  double epsilon = 1.0;
  std::string table;
  double p_max = 1.0;
  int dim = 1;
  double growth_rate = 0.0;
  int samples = 101;
  bool numeric = false;
  std::string output;
};

PressureLaw weight_law(const WeightArgs& a) {
  ScenarioConfig c;
  c.law.kind = a.law;
  c.law.gamma = a.gamma;
  c.law.epsilon = a.epsilon;
  c.law.table = a.table;
  c.law.p_max = a.p_max;
  if (a.law != "power-law" && a.law != "dhv" && a.law != "tabulated") {
    throw ConfigError("law", 0, "must be power-law, dhv or tabulated");
  }
  return make_law(c);
}

int cmd_verify_weights(const WeightArgs& a) {
  const PressureLaw law = weight_law(a);
  const double pm = law.p_max();
  const GrowthLaw growth =
      a.growth_rate > 0.0 ? GrowthLaw::linear(a.growth_rate, pm) : GrowthLaw::zero(pm);
  const Construction how = a.numeric ? Construction::Numeric : Construction::Auto;
  const int N = a.dim;
  if (N < 1) throw ConfigError("dim", 0, "must be at least 1");

  nlohmann::ordered_json summary;
  summary["law"] = law.describe();
  summary["growth"] = growth.describe();
  summary["p_max"] = pm;
  summary["dim"] = N;

  struct Row {
    std::string name;
    std::optional<Weight> weight;
    std::function<double(double)> alpha, delta;
    Family beta;
  };
  std::vector<Row> families;

  const Weight l1 = build_l1_weight(law, pm, how);
  families.push_back({"l1", l1, [&, l1](double p) { return alpha1(law, l1, N, p); },
                      [&, l1](double p) {
                        if (growth.is_zero()) return 0.0;
                        return growth.g(p) * (2.0 * (N - 2.0) / N - hprime_q_over_h(law, l1, p)) +
                               growth.g_prime(p) * law.q(p);
                      },
                      Family::L1});
  summary["l1"] = {{"closed_form", l1.closed_form()},
                   {"delta1_bar", delta1_bar(law, growth, l1, N, pm)}};

  try {
    const Weight li = build_linfty_weight(law, pm, how);
    const LinftyMargins m = linfty_bounds_check(law, li, pm);
    nlohmann::ordered_json j = {{"closed_form", li.closed_form()},
                                {"envelope_lower_margin", m.lower_margin},
                                {"envelope_upper_margin", m.upper_margin},
                                {"delta_infty_bar", delta_infty_bar(law, growth, li, N, pm)}};
    for (Branch b : {Branch::Ratio, Branch::ODE}) {
      const std::string key = std::string("alpha_tilde_0_") + to_string(b);
      try {
        j[key] = alpha_tilde_0(law, pm, b, N);
      } catch (const HypothesisViolation& e) {
        j[key] = std::string("hypothesis fails: ") + e.what();
      }
    }
    summary["linfty"] = j;
    families.push_back({"linfty", li,
                        [&](double p) { return law.q_prime(p) + 2.0 / N; },
                        [&, li](double p) { return delta_infty(law, growth, li, N, p); },
                        Family::LInfty});
  } catch (const HypothesisViolation& e) {
    summary["linfty"] = {{"error", e.what()}};
  }

  const Weight one = Weight::identity(pm);
  const CoefficientReport r2 = l2_coefficients(law, growth, one, N, pm);
  summary["l2"] = {{"alpha2_min", r2.alpha_min},     {"alpha2_argmin", r2.alpha_argmin},
                   {"beta2_max", r2.beta_max},       {"beta2_max_abs", r2.beta_max_abs},
                   {"delta2_bar", r2.delta_bar},     {"scan_resolution", r2.scan_resolution},
                   {"feasible", r2.alpha_min >= 0.0 && r2.beta_max <= 1e-12}};
  families.push_back({"l2", one, [&](double p) { return alpha2(law, one, N, p); },
                      [&](double p) { return delta2(law, growth, one, N, p); },
                      Family::L2});
  try {
    const SpecialCase sc = special_case_alpha0(law, growth, N, pm);
    summary["special"] = {{"alpha0", sc.alpha0}, {"delta_bar", sc.delta_bar}};
  } catch (const HypothesisViolation& e) {
    summary["special"] = {{"error", e.what()}};
  }

  const fs::path dir = output_dir("ablab-out", a.output);
  fs::create_directories(dir);
  std::ofstream csv(dir / "weights.csv");
  csv << "family,p,h,h_prime,h_second,alpha,beta_residual,delta\n";
  for (const auto& f : families) {
    for (int i = 0; i < a.samples; ++i) {
      const double p = pm * i / (a.samples - 1);
      const Weight& w = *f.weight;
      csv << f.name << ',' << format_double(p) << ',' << format_double(w.h(p)) << ','
          << format_double(w.h_prime(p)) << ',' << format_double(w.h_second(p)) << ','
          << format_double(f.alpha(p)) << ','
          << format_double(beta_residual(law, w, f.beta, p)) << ','
          << format_double(f.delta(p)) << '\n';
    }
  }
  write_text(dir / "weights_summary.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  return kExitPass;
}

// --- barenblatt / aronson ----------------------------------------------

struct BarenblattArgs {
  double gamma = 2.0;
  int dim = 1;
  double c0 = 1.0;
  double t = 1.0;
  int cells = 256;
  double extent = 10.0;
  std::string output;
};

int cmd_barenblatt(const BarenblattArgs& a) {
  const BarenblattParams b(a.gamma, a.dim, a.c0);
  const Grid grid(a.dim, a.extent, a.cells, Boundary::NoFlux);
  const Field n = barenblatt_density(b, grid, a.t);
  const Field p = barenblatt_pressure(b, grid, a.t);
  const fs::path dir = output_dir("ablab-out", a.output);
  fs::create_directories(dir);
  std::ofstream csv(dir / "barenblatt.csv");
  if (a.dim == 1) {
    csv << "cell_index,x,n,p\n";
    for (int i = 0; i < a.cells; ++i) {
      csv << i << ',' << format_double(grid.center(i) - 0.5 * a.extent) << ','
          << format_double(n[i]) << ',' << format_double(p[i]) << '\n';
    }
  } else {
    csv << "cell_index,cell_index_y,x,y,n,p\n";
    for (int j = 0; j < a.cells; ++j) {
      for (int i = 0; i < a.cells; ++i) {
        const std::size_t k = static_cast<std::size_t>(j) * a.cells + i;
        csv << i << ',' << j << ',' << format_double(grid.center(i) - 0.5 * a.extent) << ','
            << format_double(grid.center(j) - 0.5 * a.extent) << ',' << format_double(n[k])
            << ',' << format_double(p[k]) << '\n';
      }
    }
  }
  std::cout << "alpha = " << format_double(b.alpha) << ", beta = " << format_double(b.beta)
            << ", k = " << format_double(b.k) << "\n"
            << "t Laplace p = " << format_double(b.t_laplacian())
            << ", support radius = " << format_double(b.support_radius(a.t))
            << ", sharpness gap = " << format_double(sharpness_gap(a.gamma, a.dim)) << "\n";
  return kExitPass;
}

struct AronsonArgs {
  double gamma = 2.0;
  int cells = 1024;
  double t_end = 1.0;
  double stop_factor = 100.0;
  double trigger = 10.0;
  double saturation = 0.5;
  std::string output;
};

int cmd_aronson(const AronsonArgs& a) {
  if (a.cells < 512) throw ConfigError("cells", 0, "the reference run needs at least 512 cells");
  const DiagnosticsSeries d = aronson_reference(a.gamma, a.cells, a.t_end, a.stop_factor);
  const fs::path dir = output_dir("ablab-out", a.output);
  fs::create_directories(dir);
  {
    std::ofstream csv(dir / "aronson.csv");
    csv << "time,max_pxx\n";
    for (std::size_t i = 0; i < d.size(); ++i) {
      csv << format_double(d.times[i]) << ',' << format_double(d.max_pxx[i]) << '\n';
    }
  }
  const BlowupFit fit = blowup_fit(d.times, d.max_pxx, a.trigger, a.saturation);
  const double peak = *std::max_element(d.max_pxx.begin(), d.max_pxx.end());
  nlohmann::ordered_json j;
  j["gamma"] = a.gamma;
  j["cells"] = a.cells;
  j["initial_max_pxx"] = d.max_pxx.front();
  j["peak_max_pxx"] = peak;
  j["peak_ratio"] = peak / d.max_pxx.front();
  j["last_time"] = d.times.back();
  j["triggered"] = fit.triggered;
  if (fit.triggered) {
    j["T_est"] = fit.T;
    j["C_est"] = fit.C;
    j["r_squared"] = fit.r_squared;
    j["window"] = fit.window;
    j["trigger_time"] = fit.trigger_time;
  }
  j["T_candidates"] = {{"1/(2 gamma)", 1.0 / (2.0 * a.gamma)},
                       {"1/(2 (gamma + 1))", 1.0 / (2.0 * (a.gamma + 1.0))},
                       {"1/(2 gamma + 4)", 1.0 / (2.0 * a.gamma + 4.0)}};
  write_text(dir / "aronson_fit.json", j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
  return kExitPass;
}

// --- report ----------------------------------------------------------------

int cmd_report(const std::string& dir_arg) {
  const fs::path dir = dir_arg;
  if (!fs::is_directory(dir)) throw std::runtime_error("no run directory at " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (name.rfind("bound_", 0) == 0 && e.path().extension() == ".csv") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    std::ifstream in(f);
    std::string line;
    std::getline(in, line);
    TheoremOutcome o;
    o.id = f.stem().string().substr(6);
    o.bound_form = "bound";
    o.measured_form = "measured";
    while (std::getline(in, line)) {
      std::stringstream ss(line);
      std::string cell;
      std::vector<double> v;
      while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
      if (v.size() != 4) continue;
      o.report.times.push_back(v[0]);
      o.report.measured.push_back(v[1]);
      o.report.bound.push_back(v[2]);
      o.report.margin.push_back(v[3]);
    }
    const bool lower = !o.report.bound.empty() && o.report.bound.front() < 0.0;
    o.report.sense = lower ? BoundSense::LowerBoundsMinW : BoundSense::UpperBoundsSeries;
    write_text(dir / ("plot_" + o.id + ".svg"), svg_bound_plot(o));
    std::cout << "plotted " << o.id << " (" << o.report.times.size() << " samples)\n";
  }
  if (fs::exists(dir / "summary.txt")) {
    std::ifstream in(dir / "summary.txt");
    std::cout << in.rdbuf();
  }
  return kExitPass;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Aronson-Benilan estimate laboratory: simulate porous-medium flows with growth "
               "and check lower bounds on the pressure Laplacian"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Simulate a scenario and check its estimates");
  run->add_option("config", run_args.config, "Scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--set", run_args.overrides, "Override a key, e.g. --set checks.bound_scale=0.1");
  run->add_option("-o,--output", run_args.output, "Output directory (else AB_LAB_OUTPUT, else run.output_dir)");

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Run a scenario over a list of parameter values");
  sweep->add_option("config", sweep_args.config, "Sweep file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--set", sweep_args.overrides, "Override a key");
  sweep->add_option("-o,--output", sweep_args.output, "Output directory");

  SweepArgs hs_args;
  auto* hs = app.add_subcommand("hele-shaw", "Stiff-pressure sweep with complementarity residuals");
  hs->add_option("config", hs_args.config, "Sweep file over gamma or epsilon")
      ->required()
      ->check(CLI::ExistingFile);
  hs->add_option("--set", hs_args.overrides, "Override a key");
  hs->add_option("-o,--output", hs_args.output, "Output directory");

  WeightArgs w;
  auto* vw = app.add_subcommand("verify-weights", "Tabulate weights and estimate coefficients");
  vw->add_option("--law", w.law, "power-law, dhv or tabulated")->capture_default_str();
  vw->add_option("--gamma", w.gamma, "Power-law exponent")->capture_default_str();
  vw->add_option("--epsilon", w.epsilon, "Singular-law stiffness")->capture_default_str();
  vw->add_option("--table", w.table, "CSV with columns p,q for a tabulated law");
  vw->add_option("--p-max", w.p_max, "Upper end of the pressure range")->capture_default_str();
  vw->add_option("--dim", w.dim, "Spatial dimension N")->capture_default_str();
  vw->add_option("--growth-rate", w.growth_rate, "Linear growth rate (0 for none)")
      ->capture_default_str();
  vw->add_option("--samples", w.samples, "Rows per family in the CSV")
      ->capture_default_str()
      ->check(CLI::Range(2, 1000000));
  vw->add_flag("--numeric", w.numeric, "Build weights numerically even when closed forms exist");
  vw->add_option("-o,--output", w.output, "Output directory");

  BarenblattArgs b;
  auto* bb = app.add_subcommand("barenblatt", "Dump the self-similar reference solution");
  bb->add_option("--gamma", b.gamma, "Exponent")->capture_default_str();
  bb->add_option("--dim", b.dim, "Dimension (1 or 2)")->capture_default_str()->check(CLI::Range(1, 2));
  bb->add_option("--c0", b.c0, "Free constant C0")->capture_default_str();
  bb->add_option("--time", b.t, "Time t > 0")->capture_default_str();
  bb->add_option("--cells", b.cells, "Cells per axis")->capture_default_str();
  bb->add_option("--extent", b.extent, "Box length (the solution is centred)")->capture_default_str();
  bb->add_option("-o,--output", b.output, "Output directory");

  AronsonArgs ar;
  auto* an = app.add_subcommand("aronson", "Blow-up of p_xx for p0 = cos^2(x)");
  an->add_option("--gamma", ar.gamma, "Exponent")->capture_default_str();
  an->add_option("--cells", ar.cells, "Cells on [0, 2 pi]")->capture_default_str();
  an->add_option("--t-end", ar.t_end, "Final time")->capture_default_str();
  an->add_option("--stop-factor", ar.stop_factor, "Stop once max p_xx grows by this factor")
      ->capture_default_str();
  an->add_option("--trigger", ar.trigger, "Fit window starts at this multiple of the initial value")
      ->capture_default_str();
  an->add_option("--saturation", ar.saturation,
                 "Fit window ends at this fraction of the peak (1 keeps all)")
      ->capture_default_str();
  an->add_option("-o,--output", ar.output, "Output directory");

  std::string report_dir;
  auto* rp = app.add_subcommand("report", "Redraw plots and print the summary of a run directory");
  rp->add_option("dir", report_dir, "Run output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitError;
  }

  try {
    if (*run) return cmd_run(run_args);
    if (*sweep) return cmd_sweep(sweep_args, false);
    if (*hs) return cmd_sweep(hs_args, true);
    if (*vw) return cmd_verify_weights(w);
    if (*bb) return cmd_barenblatt(b);
    if (*an) return cmd_aronson(ar);
    if (*rp) return cmd_report(report_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace ablab
