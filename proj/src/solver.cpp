#include "ablab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "ablab/errors.hpp"
#include "ablab/oracles.hpp"
#include "ablab/weights.hpp"

namespace ablab {

Field pressure_field(const Field& n, const PressureLaw& law, kernels::Backend backend) {
  Field p(n.grid, Quantity::Pressure);
  kernels::transform(n.values, p.values, [&](double v) { return law.pressure(v); }, backend);
  return p;
}

double admissible_dt(const SimState& s, double cfl_safety) {
  double max_diff = 0.0, max_growth = 0.0;
  for (double v : s.n.values) {
    const double p = s.law.pressure(v);
    max_diff = std::max(max_diff, s.law.q(p));
    if (!s.growth.is_zero()) max_growth = std::max(max_growth, std::abs(s.growth.g_extended(p)));
  }
  const double dx = s.n.grid.dx();
  double dt = std::numeric_limits<double>::infinity();
  if (max_diff > 0.0) dt = cfl_safety * dx * dx / (2.0 * s.n.grid.dim * max_diff);
  if (max_growth > 0.0) dt = std::min(dt, cfl_safety / max_growth);
  return dt;
}

SimState step_density(const SimState& s, double dt, const StepOptions& options) {
  const double limit = admissible_dt(s, options.cfl_safety);
  if (!(dt > 0.0) || dt > limit * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "step dt = " << dt << " exceeds the admissible dt = " << limit;
    throw StepRejected(os.str(), limit);
  }
  const Grid& g = s.n.grid;
  std::vector<double> phi(g.size()), source(g.size(), 0.0);
  kernels::transform(s.n.values, phi, [&](double v) { return s.law.flux_potential(v); },
                     options.backend);
  if (!s.growth.is_zero()) {
    kernels::transform(
        s.n.values, source, [&](double v) { return s.growth.g_extended(s.law.pressure(v)); },
        options.backend);
  }
  SimState out{s.time + dt, Field(g, Quantity::Density), s.law, s.growth, s.step_count + 1};
  kernels::density_update(g, s.n.values, phi, source, dt, out.n.values, options.backend);
  for (double& v : out.n.values) {
    if (v < 0.0) {
      if (v < -1e-12) {
        std::ostringstream os;
        os << "density undershoot " << v << " below -1e-12";
        throw std::runtime_error(os.str());
      }
      v = 0.0;
    }
  }
  return out;
}

double admissible_dt_pressure(const Field& p, double gamma, double cfl_safety) {
  double pmax = 0.0;
  for (double v : p.values) pmax = std::max(pmax, v);
  if (!(pmax > 0.0)) return std::numeric_limits<double>::infinity();
  const double dx = p.grid.dx();
  return cfl_safety * dx * dx / (2.0 * p.grid.dim * gamma * pmax);
}

Field step_pressure_1d(const Field& p, double gamma, double dt, const StepOptions& options) {
  if (p.grid.dim != 1) throw DomainError("step_pressure_1d needs a 1D grid");
  const double limit = admissible_dt_pressure(p, gamma, options.cfl_safety);
  if (!(dt > 0.0) || dt > limit * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "pressure step dt = " << dt << " exceeds the admissible dt = " << limit;
    throw StepRejected(os.str(), limit);
  }
  Field out(p.grid, Quantity::Pressure);
  kernels::pressure_update_1d(p.grid, p.values, gamma, dt, out.values, options.backend);
  for (double& v : out.values) v = std::max(v, 0.0);
  return out;
}

namespace {

Field read_density_csv(const std::string& path, const Grid& grid) {
  std::ifstream in(path);
  if (!in) throw ConfigError("initial.path", 0, "cannot open " + path);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, ',')) header.push_back(col);
  }
  const auto it = std::find(header.begin(), header.end(), "n");
  if (it == header.end()) throw ConfigError("initial.path", 1, "CSV needs an 'n' column");
  const auto col = static_cast<std::size_t>(it - header.begin());
  std::vector<double> values;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    for (std::size_t k = 0; k <= col; ++k) std::getline(ss, cell, ',');
    try {
      values.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw ConfigError("initial.path", row, "malformed value '" + cell + "'");
    }
  }
  if (values.size() != grid.size()) {
    throw ConfigError("initial.path", 0,
                      "CSV has " + std::to_string(values.size()) + " rows, grid has " +
                          std::to_string(grid.size()) + " cells");
  }
  return Field(grid, Quantity::Density, std::move(values));
}

}  // namespace

Field initial_density(const ScenarioConfig& c, const PressureLaw& law) {
  const Grid& g = c.grid;
  switch (c.initial.kind) {
    case InitialKind::Barenblatt: {
      if (law.kind() != PressureLaw::Kind::PowerLaw) {
        throw ConfigError("initial.kind", 0, "barenblatt data needs a power-law pressure");
      }
      return barenblatt_density(BarenblattParams(law.parameter(), g.dim, c.initial.c0), g,
                                c.initial.t0);
    }
    case InitialKind::CosSquared: {
      Field n(g, Quantity::Density);
      const int rows = g.dim == 2 ? g.cells : 1;
      for (int j = 0; j < rows; ++j) {
        for (int i = 0; i < g.cells; ++i) {
          double p = std::pow(std::cos(g.center(i)), 2);
          if (g.dim == 2) p *= std::pow(std::cos(g.center(j)), 2);
          n.values[static_cast<std::size_t>(j) * g.cells + i] = law.density(p);
        }
      }
      return n;
    }
    case InitialKind::Bump: {
      Field n(g, Quantity::Density);
      const double xc = c.initial.center * g.extent;
      const double r = c.initial.radius;
      const int rows = g.dim == 2 ? g.cells : 1;
      for (int j = 0; j < rows; ++j) {
        for (int i = 0; i < g.cells; ++i) {
          double d2 = std::pow(g.center(i) - xc, 2);
          if (g.dim == 2) d2 += std::pow(g.center(j) - xc, 2);
          const double d = std::sqrt(d2);
          n.values[static_cast<std::size_t>(j) * g.cells + i] =
              d < r ? c.initial.height * std::pow(std::cos(M_PI * d / (2.0 * r)), 2) : 0.0;
        }
      }
      return n;
    }
    case InitialKind::FromCSV:
      return read_density_csv(c.initial.path, g);
  }
  return Field(g, Quantity::Density);
}

SimulationResult simulate(const ScenarioConfig& config, const SnapshotObserver& observer) {
  const PressureLaw law = make_law(config);
  const GrowthLaw growth = make_growth(config);
  const StepOptions options{config.cfl_safety, config.backend};
  const Weight l1_weight = build_l1_weight(law, law.p_max());
  const Weight unit = Weight::identity(law.p_max());

  SimulationResult result;
  SimState state{config.start_time(), initial_density(config, law), law, growth, 0};
  DiagnosticsSeries& d = result.diagnostics;

  auto record = [&]() {
    const Field p = pressure_field(state.n, law, config.backend);
    const Field w = w_field(p, growth, config.backend);
    const Mask mask = positivity_mask(state.n, config.mask_threshold, config.mask_margin);
    const double vol = state.n.grid.cell_volume();
    d.times.push_back(state.time);
    d.mass.push_back(kernels::sum(state.n.values, config.backend) * vol);
    d.min_w.push_back(masked_min(p, w, mask));
    const auto f1 = weighted_functionals(p, w, l1_weight, mask);
    const auto f0 = weighted_functionals(p, w, unit, mask);
    d.sup_weighted_neg_w.push_back(f0.sup);
    d.l1_weighted_neg_w.push_back(f1.l1);
    d.l2_weighted_neg_w_sq.push_back(f0.l2);
    const auto comp = complementarity_residual(p, w, state.n);
    d.complementarity_r1.push_back(comp.r1);
    d.complementarity_r2.push_back(comp.r2);
    Field lap(p.grid, Quantity::W);
    kernels::laplacian(p.grid, p.values, lap.values, config.backend);
    double pxx = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < lap.size(); ++i) {
      if (!mask[i]) continue;
      pxx = any ? std::max(pxx, lap[i]) : lap[i];
      any = true;
    }
    d.max_pxx.push_back(pxx);
    if (observer) observer(Snapshot{state.time, state.step_count, &state.n, &p, &w, &mask});
  };

  const double t0 = config.start_time();
  const int count = config.t_end > t0 ? config.snapshot_count : 1;
  record();
  for (int k = 1; k < count; ++k) {
    const double target = t0 + (config.t_end - t0) * k / (count - 1);
    while (state.time < target) {
      double dt = admissible_dt(state, config.cfl_safety);
      bool last = false;
      if (dt >= target - state.time) {
        dt = target - state.time;
        last = true;
      }
      try {
        state = step_density(state, dt, options);
      } catch (const StepRejected& e) {
        std::ostringstream os;
        os << "t = " << state.time << ", step " << state.step_count << ": " << e.what();
        throw StepRejected(os.str(), e.admissible_dt());
      } catch (const DomainError& e) {
        std::ostringstream os;
        os << "t = " << state.time << ", step " << state.step_count << ": " << e.what();
        throw DomainError(os.str());
      } catch (const RangeError& e) {
        std::ostringstream os;
        os << "t = " << state.time << ", step " << state.step_count << ": " << e.what();
        throw RangeError(os.str());
      } catch (const std::runtime_error& e) {
        std::ostringstream os;
        os << "t = " << state.time << ", step " << state.step_count << ": " << e.what();
        throw std::runtime_error(os.str());
      }
      if (last) state.time = target;
    }
    record();
  }
  result.steps = state.step_count;
  result.final_state = std::move(state);
  return result;
}

}  // namespace ablab
