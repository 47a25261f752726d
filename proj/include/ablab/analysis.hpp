#ifndef ABLAB_ANALYSIS_HPP
#define ABLAB_ANALYSIS_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ablab/grid.hpp"
#include "ablab/growth_law.hpp"
#include "ablab/kernels.hpp"
#include "ablab/weights.hpp"

namespace ablab {

using Mask = std::vector<std::uint8_t>;

/// w = Laplace(p) + G(p) cellwise.
Field w_field(const Field& p, const GrowthLaw& growth,
              kernels::Backend backend = kernels::Backend::Serial);

/// |f|_- = max(0, -f) cellwise.
Field neg_part(const Field& f);

/// Cells with n > threshold * max(n), shrunk by `margin` cells (Chebyshev
/// distance) away from every excluded cell. The shrink keeps free-boundary
/// stencil artefacts out of the estimates.
Mask positivity_mask(const Field& n, double threshold, int margin = 0);
Mask full_mask(const Grid& grid);
std::size_t mask_count(const Mask& m);

struct WeightedFunctionals {
  double l1 = 0.0;   // sum h |w|_- dx^d
  double l2 = 0.0;   // sum h |w|_-^2 dx^d
  double sup = 0.0;  // max h |w|_-
};
WeightedFunctionals weighted_functionals(const Field& p, const Field& w, const Weight& weight,
                                         const Mask& mask);
WeightedFunctionals weighted_functionals(const Field& p, const Field& w, const Weight& weight,
                                         const Field& n, double mask_threshold,
                                         int mask_margin = 0);

/// Minimum of factor(p) * w over the mask (0 when the mask is empty).
double masked_min(const Field& p, const Field& w, const Mask& mask,
                  const std::function<double(double)>& factor = {});

enum class DecayModel { CoverT, CoverT2 };
struct DecayFit {
  double C = 0.0;
  double r_squared = 0.0;
  int samples = 0;
};
/// Fixed-slope fit of log y = log C - k log t (k = 1 or 2) over samples with
/// t > 0 and y > 0. Throws InsufficientData for fewer than 5 such samples.
DecayFit fit_decay(std::span<const double> t, std::span<const double> y, DecayModel model);

enum class BoundSense { UpperBoundsSeries, LowerBoundsMinW };

struct BoundReport {
  std::string theorem_id;
  BoundSense sense = BoundSense::UpperBoundsSeries;
  std::vector<double> times, measured, bound, margin;  // margin > 0 means satisfied
  double worst_margin = 0.0;
  double worst_time = 0.0;
  double worst_relative = 0.0;  // worst margin / |bound|
  double tolerance = 0.1;
  bool passed = true;
};
/// Margins bound - measured (upper) or measured - bound (lower) at every
/// sample; passes when each margin >= -tolerance * |bound|.
BoundReport bound_check(std::string theorem_id, std::span<const double> t,
                        std::span<const double> measured,
                        const std::function<double(double)>& bound_fn, BoundSense sense,
                        double tolerance = 0.1);

struct Complementarity {
  double r1 = 0.0;  // sum |p w| dx^d
  double r2 = 0.0;  // sum |p (n - 1)| dx^d
};
Complementarity complementarity_residual(const Field& p, const Field& w, const Field& n);

struct BlowupFit {
  bool triggered = false;
  double T = 0.0;
  double C = 0.0;
  double r_squared = 0.0;
  int window = 0;
  double trigger_time = 0.0;
};
/// Fits y ~ C / (T - t) in log space on the samples after y first reaches
/// trigger_factor * y[0]. An untriggered series gives triggered = false.
/// With saturation_fraction < 1 the window also ends before y first exceeds
/// that fraction of its maximum; on a fixed grid the tail of a blow-up series
/// is capped by resolution and would bias T upwards.
BlowupFit blowup_fit(std::span<const double> t, std::span<const double> y,
                     double trigger_factor = 10.0, double saturation_fraction = 1.0);

struct DiagnosticsSeries {
  std::vector<double> times, mass, min_w, sup_weighted_neg_w, l1_weighted_neg_w,
      l2_weighted_neg_w_sq, complementarity_r1, complementarity_r2, max_pxx;

  std::size_t size() const { return times.size(); }
  void write_csv(std::ostream& os) const;
};

/// Formats a double with 17 significant digits (round-trip exact).
std::string format_double(double v);

}  // namespace ablab

#endif  // ABLAB_ANALYSIS_HPP
