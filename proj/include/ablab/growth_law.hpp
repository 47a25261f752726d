#ifndef ABLAB_GROWTH_LAW_HPP
#define ABLAB_GROWTH_LAW_HPP

#include <string>
#include <vector>

#include "ablab/numerics.hpp"

namespace ablab {

/// Reaction term G(p): decreasing, nonnegative on [0, p_M] and vanishing at
/// the homeostatic pressure p_M.
class GrowthLaw {
 public:
  enum class Kind { Zero, Linear, Tabulated };

  /// `p_max` only sets the scan range for the estimate constants.
  static GrowthLaw zero(double p_max = 1.0);
  /// G(p) = rate * (p_max - p).
  static GrowthLaw linear(double rate, double p_max);
  /// Samples of G over [0, p_M]; the last abscissa is p_M.
  static GrowthLaw tabulated(std::vector<double> p, std::vector<double> g);

  Kind kind() const { return kind_; }
  double rate() const { return rate_; }
  double p_max() const { return p_max_; }
  bool is_zero() const { return kind_ == Kind::Zero; }
  std::string describe() const;

  /// Range-checked evaluation on [0, p_M]; tolerates overshoot up to 1e-9 p_M.
  double g(double p) const;
  double g_prime(double p) const;

  /// Evaluation used by the solver. Continues the law past p_M by its tangent
  /// at p_M, so an overshooting cell is pushed back rather than rejected.
  double g_extended(double p) const;

 private:
  GrowthLaw() = default;
  double clamp_checked(double p) const;

  Kind kind_ = Kind::Zero;
  double rate_ = 0.0;
  double p_max_ = 1.0;
  numerics::Pchip table_;
};

}  // namespace ablab

#endif  // ABLAB_GROWTH_LAW_HPP
