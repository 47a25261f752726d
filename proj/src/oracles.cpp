#include "ablab/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ablab/errors.hpp"
#include "ablab/numerics.hpp"
#include "ablab/solver.hpp"

namespace ablab {

BarenblattParams::BarenblattParams(double g, int n, double c0) : gamma(g), N(n), C0(c0) {
  if (!(g > 0.0)) throw DomainError("barenblatt gamma must be positive");
  if (n < 1) throw DomainError("barenblatt dimension must be at least 1");
  if (!(c0 > 0.0)) throw DomainError("barenblatt C0 must be positive");
  beta = 1.0 / (N * gamma + 2.0);
  alpha = N * gamma * beta;
  k = 0.5 * beta;
}

double BarenblattParams::support_radius(double t) const {
  if (!(t > 0.0)) throw DomainError("barenblatt time must be positive");
  return std::sqrt(C0 / k) * std::pow(t, beta);
}

std::pair<double, double> barenblatt(const BarenblattParams& b, double t, double r2) {
  if (!(t > 0.0)) throw DomainError("barenblatt time must be positive");
  const double inner = b.C0 - b.k * r2 * std::pow(t, -2.0 * b.beta);
  if (inner <= 0.0) return {0.0, 0.0};
  const double p = std::pow(t, -b.alpha) * inner;
  return {std::pow(p, 1.0 / b.gamma), p};
}

namespace {

double half_box(const Grid& g) { return 0.5 * g.extent; }

}  // namespace

Field barenblatt_density(const BarenblattParams& b, const Grid& grid, double t) {
  if (grid.dim != b.N) throw DomainError("grid dimension differs from the barenblatt dimension");
  static const numerics::Quadrature gl = numerics::gauss_legendre(16);
  const double dx = grid.dx();
  const double c = half_box(grid);
  Field n(grid, Quantity::Density);
  if (grid.dim == 1) {
    for (int i = 0; i < grid.cells; ++i) {
      const double x0 = grid.center(i) - c;
      double acc = 0.0;
      for (std::size_t a = 0; a < gl.nodes.size(); ++a) {
        const double x = x0 + 0.5 * dx * gl.nodes[a];
        acc += gl.weights[a] * barenblatt(b, t, x * x).first;
      }
      n.values[i] = 0.5 * acc;
    }
    return n;
  }
  for (int j = 0; j < grid.cells; ++j) {
    const double y0 = grid.center(j) - c;
    for (int i = 0; i < grid.cells; ++i) {
      const double x0 = grid.center(i) - c;
      double acc = 0.0;
      for (std::size_t a = 0; a < gl.nodes.size(); ++a) {
        const double x = x0 + 0.5 * dx * gl.nodes[a];
        for (std::size_t e = 0; e < gl.nodes.size(); ++e) {
          const double y = y0 + 0.5 * dx * gl.nodes[e];
          acc += gl.weights[a] * gl.weights[e] * barenblatt(b, t, x * x + y * y).first;
        }
      }
      n.values[static_cast<std::size_t>(j) * grid.cells + i] = 0.25 * acc;
    }
  }
  return n;
}

Field barenblatt_pressure(const BarenblattParams& b, const Grid& grid, double t) {
  if (grid.dim != b.N) throw DomainError("grid dimension differs from the barenblatt dimension");
  const double c = half_box(grid);
  Field p(grid, Quantity::Pressure);
  const int rows = grid.dim == 2 ? grid.cells : 1;
  for (int j = 0; j < rows; ++j) {
    const double y = grid.dim == 2 ? grid.center(j) - c : 0.0;
    for (int i = 0; i < grid.cells; ++i) {
      const double x = grid.center(i) - c;
      p.values[static_cast<std::size_t>(j) * grid.cells + i] = barenblatt(b, t, x * x + y * y).second;
    }
  }
  return p;
}

double sharpness_gap(double gamma, int N) {
  if (!(gamma > 0.0) || N < 1) throw DomainError("sharpness gap needs gamma > 0 and N >= 1");
  return 2.0 / (gamma * (N * gamma + 2.0));
}

DiagnosticsSeries aronson_reference(double gamma, int cells, double t_end, double stop_factor,
                                    double cfl_safety) {
  if (cells < 512) throw DomainError("the Aronson reference needs at least 512 cells");
  if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
  const Grid grid(1, 2.0 * M_PI, cells, Boundary::Periodic);
  Field p(grid, Quantity::Pressure);
  for (int i = 0; i < cells; ++i) p.values[i] = std::pow(std::cos(grid.center(i)), 2);

  const double inv2 = 1.0 / (grid.dx() * grid.dx());
  auto max_pxx = [&](const Field& f) {
    double m = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < cells; ++i) {
      const double l = f.values[(i + cells - 1) % cells];
      const double r = f.values[(i + 1) % cells];
      m = std::max(m, (r - 2.0 * f.values[i] + l) * inv2);
    }
    return m;
  };

  DiagnosticsSeries d;
  double t = 0.0;
  d.times.push_back(t);
  d.max_pxx.push_back(max_pxx(p));
  const double start = d.max_pxx.front();
  const StepOptions options{cfl_safety, kernels::Backend::Serial};
  double peak = start;
  std::size_t peak_at = 0;
  while (t < t_end && d.max_pxx.back() < stop_factor * start) {
    double dt = admissible_dt_pressure(p, gamma, cfl_safety);
    if (!std::isfinite(dt)) break;
    dt = std::min(dt, t_end - t);
    p = step_pressure_1d(p, gamma, dt, options);
    t += dt;
    d.times.push_back(t);
    d.max_pxx.push_back(max_pxx(p));
    if (d.max_pxx.back() >= peak) {
      peak = d.max_pxx.back();
      peak_at = d.size() - 1;
    } else if (d.max_pxx.back() < 0.99 * peak) {
      // The grid can no longer resolve the singularity and max p_xx turns
      // over; the series ends at its peak.
      d.times.resize(peak_at + 1);
      d.max_pxx.resize(peak_at + 1);
      break;
    }
  }
  return d;
}

}  // namespace ablab
