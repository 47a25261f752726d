#ifndef ABLAB_ORACLES_HPP
#define ABLAB_ORACLES_HPP

#include <utility>

#include "ablab/analysis.hpp"
#include "ablab/grid.hpp"
#include "ablab/pressure_law.hpp"

namespace ablab {

/// Self-similar solution p = t^{-a} (C0 - k |x|^2 t^{-2b})_+ of
/// p_t = gamma p Laplace p + |grad p|^2, with b = 1/(N gamma + 2), a = N gamma b
/// and k = b / 2.
struct BarenblattParams {
  double gamma = 2.0;
  int N = 1;
  double alpha = 0.0;  // a
  double beta = 0.0;   // b
  double k = 0.0;
  double C0 = 1.0;

  BarenblattParams(double gamma, int N, double C0 = 1.0);
  /// t Laplace p inside the support: -N / (N gamma + 2).
  double t_laplacian() const { return -N * beta; }
  /// Radius of the support at time t.
  double support_radius(double t) const;
};

/// (n, p) at time t and squared distance r2 = |x|^2 from the centre.
std::pair<double, double> barenblatt(const BarenblattParams& params, double t, double r2);

/// Cell averages of the Barenblatt density on a grid centred in the box
/// (16-point Gauss-Legendre per axis).
Field barenblatt_density(const BarenblattParams& params, const Grid& grid, double t);
/// Point values of the Barenblatt pressure at cell centres.
Field barenblatt_pressure(const BarenblattParams& params, const Grid& grid, double t);

/// 1/gamma - N/(N gamma + 2) = 2 / (gamma (N gamma + 2)).
double sharpness_gap(double gamma, int N);

/// Pressure-form run of p0 = cos^2(x) on a periodic [0, 2 pi] grid. Records
/// max p_xx after every step; stops at t_end, once max p_xx exceeds
/// stop_factor times its initial value, or once it falls 1% below its running
/// peak (the grid has stopped resolving the singularity). In the last case the
/// series is cut at the peak.
DiagnosticsSeries aronson_reference(double gamma, int cells, double t_end,
                                    double stop_factor = 100.0, double cfl_safety = 0.45);

}  // namespace ablab

#endif  // ABLAB_ORACLES_HPP
