#ifndef ABLAB_PRESSURE_LAW_HPP
#define ABLAB_PRESSURE_LAW_HPP

#include <memory>
#include <string>
#include <vector>

#include "ablab/numerics.hpp"

namespace ablab {

/// Constitutive law p = p(n) together with q(p) = n p'(n) and the flux
/// potential Phi(n) = int_0^n s p'(s) ds, so that div(n grad p) = Laplace Phi(n).
///
/// Three families: the power law p = n^gamma, the singular law
/// p = eps n / (1 - n), and a tabulated law given by samples of q over
/// [0, p_max]. A tabulated law is normalised so that n(p_max) = 1.
class PressureLaw {
 public:
  enum class Kind { PowerLaw, DHV, Tabulated };

  static PressureLaw power_law(double gamma, double p_max = 1.0);
  static PressureLaw dhv(double epsilon, double p_max = 1.0);
  /// `p` must start at 0, be strictly increasing and end at p_max; `q` must
  /// vanish at 0 and be positive elsewhere.
  static PressureLaw tabulated(std::vector<double> p, std::vector<double> q);

  Kind kind() const { return kind_; }
  double parameter() const { return parameter_; }  // gamma or eps; 0 for tabulated
  double p_max() const { return p_max_; }
  PressureLaw with_p_max(double p_max) const;
  std::string describe() const;

  double pressure(double n) const;
  double density(double p) const;

  double q(double p) const;
  double q_prime(double p) const;
  double q_second(double p) const;
  /// q(p) - q'(0) p, computed without cancellation for small p.
  double q_excess(double p) const;

  double flux_potential(double n) const;
  /// dPhi/dn = q(p(n)).
  double flux_potential_prime(double n) const { return q(pressure(n)); }

  /// Upper end of the density domain: +inf for the power law, 1 otherwise.
  double density_limit() const;

 private:
  struct Table;
  PressureLaw() = default;
  void check_table_range(double p) const;

  Kind kind_ = Kind::PowerLaw;
  double parameter_ = 1.0;
  double p_max_ = 1.0;
  std::shared_ptr<const Table> table_;
};

}  // namespace ablab

#endif  // ABLAB_PRESSURE_LAW_HPP
