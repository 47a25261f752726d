#ifndef ABLAB_TESTS_REFERENCE_HPP
#define ABLAB_TESTS_REFERENCE_HPP

// Independent reference computations for the tests. They avoid the library's
// numerics on purpose: fixed-panel Simpson instead of adaptive quadrature,
// brute-force dense scans instead of scan + golden section, classical RK4
// instead of the embedded pair.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace ref {

inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int panels = 20000) {
  if (panels % 2) ++panels;
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

inline double dense_max(const std::function<double(double)>& f, double lo, double hi,
                        int points = 1 << 16) {
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= points; ++i) best = std::max(best, f(lo + (hi - lo) * i / points));
  return best;
}

inline double dense_min(const std::function<double(double)>& f, double lo, double hi,
                        int points = 1 << 16) {
  return -dense_max([&](double x) { return -f(x); }, lo, hi, points);
}

/// Classical RK4 with a fixed step for y' = f(x, y).
inline double rk4(const std::function<double(double, double)>& f, double x0, double y0,
                  double x1, int steps = 20000) {
  const double h = (x1 - x0) / steps;
  double x = x0, y = y0;
  for (int i = 0; i < steps; ++i) {
    const double k1 = f(x, y), k2 = f(x + h / 2, y + h / 2 * k1), k3 = f(x + h / 2, y + h / 2 * k2),
                 k4 = f(x + h, y + h * k3);
    y += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    x += h;
  }
  return y;
}

/// L-infinity weight by RK4 on q u' + (q' + 1) u = 1 + q'(0), started at a
/// small p0 from the series u = 1 + u'(0) p. Integrates in log p, where the
/// regular-singular point at 0 becomes a bounded coefficient.
inline double linfty_weight(const std::function<double(double)>& q,
                            const std::function<double(double)>& qp,
                            const std::function<double(double)>& qpp, double p) {
  if (p <= 0.0) return 1.0;
  const double p0 = 1e-7 * p;
  const double u1 = -qpp(0.0) / (2.0 * qp(0.0) + 1.0);
  const double c = 1.0 + qp(0.0);
  auto rhs = [&](double s, double v) {
    const double x = std::min(std::exp(s), p);
    return x * (c - (qp(x) + 1.0) * v) / q(x);
  };
  const double u = rk4(rhs, std::log(p0), 1.0 + u1 * p0, std::log(p), 40000);
  return 1.0 / u;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace ref

#endif  // ABLAB_TESTS_REFERENCE_HPP
