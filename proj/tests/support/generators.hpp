#ifndef ABLAB_TESTS_GENERATORS_HPP
#define ABLAB_TESTS_GENERATORS_HPP

// Seeded generators for the property tests. Each property draws its cases
// from its own fixed seed, so failures reproduce exactly.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "ablab/grid.hpp"
#include "ablab/pressure_law.hpp"

namespace gen {

class Source {
 public:
  explicit Source(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  /// Log-uniform on [lo, hi], for scale parameters.
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// Tabulated law on [0, p_max] whose q' stays inside (qp_lo, qp_hi). The slope
/// is a random smooth profile: a few sine modes squashed into the interval.
/// Draws with q'(0) < 0.2 or q <= 0 somewhere are rejected, since a law needs
/// q > 0 away from 0.
inline ablab::PressureLaw tabulated_law(Source& s, double qp_lo, double qp_hi,
                                        double p_max = 1.0, int samples = 257) {
  const double mid = 0.5 * (qp_lo + qp_hi), half = 0.5 * (qp_hi - qp_lo) * 0.98;
  for (;;) {
    double a[3], f[3], ph[3];
    for (int k = 0; k < 3; ++k) {
      a[k] = s.uniform(-1.5, 1.5);
      f[k] = s.uniform(0.5, 4.0);
      ph[k] = s.uniform(0.0, 6.283185307179586);
    }
    const double shift = s.uniform(-1.0, 1.0);
    auto slope = [&](double x) {
      double v = shift;
      for (int k = 0; k < 3; ++k) v += a[k] * std::sin(f[k] * x / p_max + ph[k]);
      return mid + half * std::tanh(v);
    };
    if (slope(0.0) < 0.2) continue;
    std::vector<double> p(samples), q(samples);
    const double h = p_max / (samples - 1);
    bool positive = true;
    for (int i = 1; i < samples; ++i) {
      p[i] = i * h;
      // Simpson on each panel of the slope profile.
      const double x0 = p[i - 1], x1 = p[i];
      q[i] = q[i - 1] + h / 6.0 * (slope(x0) + 4.0 * slope(0.5 * (x0 + x1)) + slope(x1));
      positive = positive && q[i] > 0.0;
    }
    if (!positive) continue;
    p.back() = p_max;
    return ablab::PressureLaw::tabulated(std::move(p), std::move(q));
  }
}

/// Nonnegative density field with a few compactly supported bumps.
inline ablab::Field bump_field(Source& s, const ablab::Grid& g, double height = 1.0) {
  ablab::Field f(g, ablab::Quantity::Density);
  const int bumps = s.integer(1, 3);
  for (int b = 0; b < bumps; ++b) {
    const double c = s.uniform(0.25, 0.75) * g.extent;
    const double r = s.uniform(0.08, 0.2) * g.extent;
    const double a = s.uniform(0.2, 1.0) * height;
    for (int i = 0; i < g.cells; ++i) {
      const double d = std::abs(g.center(i) - c);
      if (d < r) {
        const double v = std::cos(1.5707963267948966 * d / r);
        f[i] = std::max(f[i], a * v * v);
      }
    }
  }
  return f;
}

}  // namespace gen

#endif  // ABLAB_TESTS_GENERATORS_HPP
