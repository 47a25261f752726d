#ifndef ABLAB_WEIGHTS_HPP
#define ABLAB_WEIGHTS_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ablab/grid.hpp"
#include "ablab/growth_law.hpp"
#include "ablab/pressure_law.hpp"

namespace ablab {

enum class Provenance { L1Construction, LInftyODE, Identity, UserPoly };
const char* to_string(Provenance p);

/// How a weight is produced: closed form when one exists, or always from q by
/// quadrature / ODE integration.
enum class Construction { Auto, Numeric };

/// Scalar weight h(p) with its first two derivatives. Cheap to copy; the
/// numeric constructions share an immutable node table.
class Weight {
 public:
  struct Functions {
    std::function<double(double)> h, h_prime, h_second;
  };

  Weight(Functions f, Provenance provenance, bool closed_form, std::string label,
         double p_max);

  static Weight identity(double p_max = 1.0);
  /// h(p) = sum_k c_k p^k.
  static Weight polynomial(std::vector<double> coefficients, double p_max = 1.0);

  double h(double p) const { return f_->h(p); }
  double h_prime(double p) const { return f_->h_prime(p); }
  double h_second(double p) const { return f_->h_second(p); }

  Provenance provenance() const { return provenance_; }
  bool closed_form() const { return closed_form_; }
  const std::string& label() const { return label_; }
  double p_max() const { return p_max_; }
  /// Lowest power of p in a polynomial weight (0 for the others).
  int leading_power() const { return leading_power_; }

 private:
  std::shared_ptr<const Functions> f_;
  Provenance provenance_;
  bool closed_form_;
  std::string label_;
  double p_max_;
  int leading_power_ = 0;
};

/// h(p) = int_0^p rho^{1/a} exp(g(rho)) d rho, the solution of q h'' = h' with
/// h(0) = 0 normalised like the closed forms (a = q'(0)).
Weight build_l1_weight(const PressureLaw& law, double p_max,
                       Construction construction = Construction::Auto);

/// h = 1/u with q u' + (q' + 1) u = 1 + q'(0), u(0) = 1.
Weight build_linfty_weight(const PressureLaw& law, double p_max,
                           Construction construction = Construction::Auto);

/// The singular-law weight in the form it is usually quoted,
/// 1 + p - eps log(p + eps) + eps log eps. It does not solve the weight ODE;
/// kept for comparison in diagnostics.
Weight published_dhv_linfty_weight(double epsilon, double p_max = 1.0);

/// Limit-aware h' q / h (the value at p = 0 is the one-sided limit).
double hprime_q_over_h(const PressureLaw& law, const Weight& weight, double p);

double alpha1(const PressureLaw& law, const Weight& weight, int N, double p);
/// int_0^p (q h' + h / N) d rho; positivity diagnostic only.
double alpha1_integral_form(const PressureLaw& law, const Weight& weight, int N, double p);

/// Half the integral of h(p)^2 / alpha1(p) over the snapshot; cells with p = 0
/// contribute 0. Throws HypothesisViolation when alpha1 <= 0 where p > 0.
double l1_constant_A(const Weight& weight, const std::function<double(double)>& alpha1_fn,
                     const Field& pressure);

double delta1_bar(const PressureLaw& law, const GrowthLaw& growth, const Weight& weight, int N,
                  double p_max);

struct LinftyMargins {
  double lower_margin = 0.0;  // min over p of h - lower envelope
  double upper_margin = 0.0;  // min over p of upper envelope - h
  double lower_at = 0.0;
  double upper_at = 0.0;
};
LinftyMargins linfty_bounds_check(const PressureLaw& law, const Weight& weight, double p_max);

enum class Branch { Ratio, ODE };
const char* to_string(Branch b);
double alpha_tilde_0(const PressureLaw& law, double p_max, Branch branch, int N);
/// True when the hypothesis of the branch holds on the scan.
bool branch_hypothesis_holds(const PressureLaw& law, double p_max, Branch branch);

struct SpecialCase {
  double alpha0 = 0.0;
  double alpha0_at = 0.0;
  double delta_bar = 0.0;
  double delta_bar_at = 0.0;
};
SpecialCase special_case_alpha0(const PressureLaw& law, const GrowthLaw& growth, int N,
                                double p_max);

struct CoefficientReport {
  double alpha_min = 0.0;
  double alpha_argmin = 0.0;
  double beta_max = 0.0;      // signed maximum
  double beta_max_abs = 0.0;
  double delta_bar = 0.0;
  std::optional<double> constant_A;
  std::optional<double> alpha_tilde_0;
  int scan_resolution = 0;
};

double alpha2(const PressureLaw& law, const Weight& weight, int N, double p);
double beta2(const PressureLaw& law, const Weight& weight, double p);
double delta2(const PressureLaw& law, const GrowthLaw& growth, const Weight& weight, int N,
              double p);
CoefficientReport l2_coefficients(const PressureLaw& law, const GrowthLaw& growth,
                                  const Weight& weight, int N, double p_max);

enum class Family { L1, LInfty, L2 };
double beta_residual(const PressureLaw& law, const Weight& weight, Family family, double p);

double delta_infty(const PressureLaw& law, const GrowthLaw& growth, const Weight& weight, int N,
                   double p);
double delta_infty_bar(const PressureLaw& law, const GrowthLaw& growth, const Weight& weight,
                       int N, double p_max);

enum class TimeBoundKind { InverseT, InverseT2, ExpSaturating };
/// InverseT: c / t. InverseT2: c / t^2. ExpSaturating: c delta e^{delta t} / (e^{delta t} - 1),
/// which tends to c / t as delta -> 0. The returned function throws DomainError for t <= 0.
std::function<double(double)> time_bound(TimeBoundKind kind, double constant,
                                         double delta = 0.0);

/// Scan resolution used by every coefficient scan (intervals over [0, p_max]).
inline constexpr int kScanIntervals = 4096;

}  // namespace ablab

#endif  // ABLAB_WEIGHTS_HPP
