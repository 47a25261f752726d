#ifndef ABLAB_NUMERICS_HPP
#define ABLAB_NUMERICS_HPP

// Scalar numerical building blocks shared by the laws, weights and analysis:
// adaptive Simpson quadrature, golden-section refinement, grid scans for
// extrema, monotone cubic (PCHIP) interpolation and an embedded RK5(4)
// integrator for scalar ODEs.

#include <functional>
#include <span>
#include <vector>

namespace ablab::numerics {

using ScalarFn = std::function<double(double)>;

/// Adaptive Simpson quadrature with Richardson correction. `abs_tol` is the
/// absolute error target for the whole interval.
double adaptive_simpson(const ScalarFn& f, double a, double b, double abs_tol = 1e-10,
                        int max_depth = 50);

/// Golden-section search for a minimum of a unimodal function on [a, b].
/// Returns the abscissa.
double golden_section_min(const ScalarFn& f, double a, double b, double x_tol = 1e-9);

enum class Extremum { Min, Max };

struct ScanResult {
  double value = 0.0;
  double argument = 0.0;
  int points = 0;
};

/// Uniform scan of f on [lo, hi] with `intervals` subintervals, followed by a
/// golden-section refinement on the bracket around the best grid point.
ScanResult scan_extremum(const ScalarFn& f, double lo, double hi, Extremum kind,
                         int intervals = 4096, double x_tol = 1e-9);

/// Monotone piecewise cubic Hermite interpolant (Fritsch-Butland slopes, the
/// same construction as SciPy's PchipInterpolator) on a strictly increasing
/// abscissa. Preserves monotonicity of the data and does not overshoot at
/// local extrema, so nonnegative data stays nonnegative.
class Pchip {
 public:
  Pchip() = default;
  Pchip(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;
  /// f(x) - f(x0) - f'(x0)(x - x0) on the first interval, evaluated without
  /// cancellation; falls back to direct subtraction beyond it.
  double excess_over_start_tangent(double x) const;

  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }
  std::span<const double> knots() const { return x_; }
  std::span<const double> values() const { return y_; }

 private:
  std::size_t interval(double x) const;

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> slope_;
};

using OdeRhs = std::function<double(double, double)>;

struct OdeOptions {
  double rtol = 1e-12;
  double atol = 1e-14;
  double initial_step = 0.0;  // 0: pick from the interval length
  long max_steps = 1'000'000;
};

/// Integrates y' = f(x, y) from (x0, y0) to x1 with the Dormand-Prince 5(4)
/// pair and standard step-size control. Throws std::runtime_error when the
/// step size underflows or max_steps is exceeded.
double integrate_ode(const OdeRhs& f, double x0, double y0, double x1,
                     const OdeOptions& options = {});

/// Gauss-Legendre nodes and weights on [-1, 1].
struct Quadrature {
  std::vector<double> nodes, weights;
};
Quadrature gauss_legendre(int n);

/// Least-squares slope and intercept of y against x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Coefficient of determination of predictions against observations.
double r_squared(std::span<const double> observed, std::span<const double> predicted);

}  // namespace ablab::numerics

#endif  // ABLAB_NUMERICS_HPP
