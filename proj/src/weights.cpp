#include "ablab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ablab/errors.hpp"
#include "ablab/numerics.hpp"

namespace ablab {

using numerics::Extremum;

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::L1Construction: return "L1Construction";
    case Provenance::LInftyODE: return "LInftyODE";
    case Provenance::Identity: return "Identity";
    case Provenance::UserPoly: return "UserPoly";
  }
  return "?";
}

const char* to_string(Branch b) { return b == Branch::Ratio ? "ratio" : "ode"; }

Weight::Weight(Functions f, Provenance provenance, bool closed_form, std::string label,
               double p_max)
    : f_(std::make_shared<const Functions>(std::move(f))),
      provenance_(provenance),
      closed_form_(closed_form),
      label_(std::move(label)),
      p_max_(p_max) {}

Weight Weight::identity(double p_max) {
  Functions f{[](double) { return 1.0; }, [](double) { return 0.0; },
              [](double) { return 0.0; }};
  return Weight(std::move(f), Provenance::Identity, true, "identity", p_max);
}

Weight Weight::polynomial(std::vector<double> c, double p_max) {
  if (c.empty()) throw ConstructionError("polynomial weight needs coefficients");
  auto coeffs = std::make_shared<const std::vector<double>>(std::move(c));
  auto eval = [coeffs](int derivative) {
    return [coeffs, derivative](double p) {
      double sum = 0.0;
      for (std::size_t k = static_cast<std::size_t>(derivative); k < coeffs->size(); ++k) {
        double factor = 1.0;
        for (int j = 0; j < derivative; ++j) factor *= static_cast<double>(k) - j;
        sum += factor * (*coeffs)[k] * std::pow(p, static_cast<double>(k) - derivative);
      }
      return sum;
    };
  };
  std::ostringstream label;
  label << "poly(";
  for (std::size_t k = 0; k < coeffs->size(); ++k) label << (k ? "," : "") << (*coeffs)[k];
  label << ")";
  Weight w(Functions{eval(0), eval(1), eval(2)}, Provenance::UserPoly, true, label.str(), p_max);
  int lead = 0;
  while (lead < static_cast<int>(coeffs->size()) && (*coeffs)[lead] == 0.0) ++lead;
  w.leading_power_ = lead;
  return w;
}

namespace {

// x - log(1 + x), accurate for small x.
double x_minus_log1p(double x) {
  if (std::abs(x) < 0.1) {
    double term = -x, sum = 0.0;
    for (int k = 2; k < 40; ++k) {
      term *= -x;
      sum += term / k;
    }
    return sum;
  }
  return x - std::log1p(x);
}

void check_scan_range(double p_max) {
  if (!(p_max > 0.0) || !std::isfinite(p_max)) throw DomainError("p_max must be positive");
}

numerics::ScanResult scan(const std::function<double(double)>& f, double p_max, Extremum kind) {
  return numerics::scan_extremum(f, 0.0, p_max, kind, kScanIntervals, 1e-9 * p_max);
}

// Node table for the numeric L1 weight: h'(p) = p^{1/a} exp(g(p)),
// g(p) = int_0^p (1/q - 1/(a r)) dr.
struct L1Table {
  explicit L1Table(PressureLaw l) : law(std::move(l)) {}
  PressureLaw law;
  double a = 0.0;
  double g0 = 0.0;
  double dp = 0.0;
  std::vector<double> g, H;

  double g_integrand(double r) const {
    if (r <= 0.0) return g0;
    return -law.q_excess(r) / (a * r * law.q(r));
  }
  std::size_t node_below(double p) const {
    const auto j = static_cast<std::size_t>(std::max(0.0, std::floor(p / dp)));
    return std::min<std::size_t>(j, g.size() - 1);
  }
  double g_at(double p) const {
    const std::size_t j = node_below(p);
    return g[j] + numerics::adaptive_simpson([this](double r) { return g_integrand(r); },
                                             static_cast<double>(j) * dp, p, 1e-16);
  }
  double h_prime(double p) const {
    if (p <= 0.0) return 0.0;
    return std::exp(std::log(p) / a + g_at(p));
  }
  double h(double p) const {
    if (p <= 0.0) return 0.0;
    const std::size_t j = node_below(p);
    return H[j] + numerics::adaptive_simpson([this](double r) { return h_prime(r); },
                                             static_cast<double>(j) * dp, p, 1e-17);
  }
  double h_second(double p) const {
    if (p <= 0.0) {
      if (a < 1.0) return 0.0;
      return a == 1.0 ? 1.0 : std::numeric_limits<double>::infinity();
    }
    // Derivative of p^{1/a} e^{g}.
    return h_prime(p) * (1.0 / (a * p) + g_integrand(p));
  }
};

// Node table for the numeric L-infinity weight in the variable u = 1/h.
struct LinfTable {
  explicit LinfTable(PressureLaw l) : law(std::move(l)) {}
  PressureLaw law;
  double c = 0.0;    // 1 + q'(0)
  double up0 = 0.0;  // u'(0)
  double p0 = 0.0;   // regularised start
  double dp = 0.0;
  double p_max = 0.0;
  std::vector<double> u;  // u at nodes k dp, k >= 1; u[0] = 1
  numerics::OdeOptions options;

  double rhs(double p, double v) const {
    return (c - (law.q_prime(p) + 1.0) * v) / law.q(p);
  }
  double u_at(double p) const {
    if (p <= p0) return 1.0 + up0 * p;
    auto j = static_cast<std::size_t>(std::floor(p / dp));
    j = std::min(j, u.size() - 1);
    auto f = [this](double x, double v) { return rhs(x, v); };
    if (j == 0) return numerics::integrate_ode(f, p0, 1.0 + up0 * p0, p, options);
    return numerics::integrate_ode(f, static_cast<double>(j) * dp, u[j], p, options);
  }
  double u_prime(double p, double v) const { return p <= p0 ? up0 : rhs(p, v); }
  double u_second(double p) const {
    // The closed expression loses accuracy like 1/p^2 near the singular start.
    p = std::max(p, 1e-4 * p_max);
    const double v = u_at(p);
    const double vp = rhs(p, v);
    return -((2.0 * law.q_prime(p) + 1.0) * vp + law.q_second(p) * v) / law.q(p);
  }
};

void require_q_positive(const PressureLaw& law, double p_max) {
  for (int i = 1; i <= kScanIntervals; ++i) {
    const double p = p_max * i / kScanIntervals;
    if (!(law.q(p) > 0.0)) {
      throw ConstructionError("q vanishes at p = " + std::to_string(p) +
                              "; the L1 weight needs q > 0 for p > 0");
    }
  }
  if (!(law.q_prime(0.0) > 0.0)) {
    throw ConstructionError("q'(0) must be positive for the L1 weight construction");
  }
}

Weight numeric_l1_weight(const PressureLaw& law, double p_max) {
  require_q_positive(law, p_max);
  auto t = std::make_shared<L1Table>(law);
  t->a = law.q_prime(0.0);
  t->g0 = -law.q_second(0.0) / (2.0 * t->a * t->a);
  t->dp = p_max / kScanIntervals;
  t->g.assign(kScanIntervals + 1, 0.0);
  t->H.assign(kScanIntervals + 1, 0.0);
  const L1Table* raw = t.get();
  for (int k = 1; k <= kScanIntervals; ++k) {
    t->g[k] = t->g[k - 1] + numerics::adaptive_simpson(
                                [raw](double r) { return raw->g_integrand(r); },
                                (k - 1) * t->dp, k * t->dp, 1e-16);
  }
  for (int k = 1; k <= kScanIntervals; ++k) {
    t->H[k] = t->H[k - 1] + numerics::adaptive_simpson(
                                [raw](double r) { return raw->h_prime(r); }, (k - 1) * t->dp,
                                k * t->dp, 1e-17);
  }
  Weight::Functions f{[t](double p) { return t->h(p); }, [t](double p) { return t->h_prime(p); },
                      [t](double p) { return t->h_second(p); }};
  return Weight(std::move(f), Provenance::L1Construction, false, "l1-numeric", p_max);
}

Weight numeric_linfty_weight(const PressureLaw& law, double p_max) {
  auto t = std::make_shared<LinfTable>(law);
  const double a = law.q_prime(0.0);
  t->c = 1.0 + a;
  t->up0 = -law.q_second(0.0) / (2.0 * a + 1.0);
  t->p0 = 1e-8 * p_max;
  t->p_max = p_max;
  t->dp = p_max / kScanIntervals;
  t->options.rtol = 1e-13;
  t->options.atol = 1e-15;
  if (!(a > 0.0)) throw ConstructionError("q'(0) must be positive for the weight ODE");
  t->u.assign(kScanIntervals + 1, 1.0);
  auto f = [raw = t.get()](double x, double v) { return raw->rhs(x, v); };
  t->u[1] = numerics::integrate_ode(f, t->p0, 1.0 + t->up0 * t->p0, t->dp, t->options);
  for (int k = 2; k <= kScanIntervals; ++k) {
    t->u[k] = numerics::integrate_ode(f, (k - 1) * t->dp, t->u[k - 1], k * t->dp, t->options);
  }
  for (double v : t->u) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConstructionError("weight ODE lost positivity");
  }
  Weight::Functions fs{
      [t](double p) { return 1.0 / t->u_at(p); },
      [t](double p) {
        const double v = t->u_at(p);
        return -t->u_prime(p, v) / (v * v);
      },
      [t](double p) {
        const double v = t->u_at(p);
        const double vp = t->u_prime(p, v);
        const double vpp = t->u_second(p);
        return (2.0 * vp * vp - v * vpp) / (v * v * v);
      }};
  return Weight(std::move(fs), Provenance::LInftyODE, false, "linfty-numeric", p_max);
}

}  // namespace

Weight build_l1_weight(const PressureLaw& law, double p_max, Construction construction) {
  check_scan_range(p_max);
  if (construction == Construction::Auto) {
    if (law.kind() == PressureLaw::Kind::PowerLaw) {
      const double g = law.parameter();
      Weight::Functions f{
          [g](double p) { return p <= 0.0 ? 0.0 : g / (g + 1.0) * std::pow(p, (g + 1.0) / g); },
          [g](double p) { return p <= 0.0 ? 0.0 : std::pow(p, 1.0 / g); },
          [g](double p) {
            if (p <= 0.0) {
              if (g < 1.0) return 0.0;
              return g == 1.0 ? 1.0 : std::numeric_limits<double>::infinity();
            }
            return std::pow(p, 1.0 / g - 1.0) / g;
          }};
      return Weight(std::move(f), Provenance::L1Construction, true, "l1-power-law", p_max);
    }
    if (law.kind() == PressureLaw::Kind::DHV) {
      const double e = law.parameter();
      Weight::Functions f{[e](double p) { return e * e * x_minus_log1p(p / e); },
                          [e](double p) { return e * p / (e + p); },
                          [e](double p) { return e * e / ((e + p) * (e + p)); }};
      return Weight(std::move(f), Provenance::L1Construction, true, "l1-dhv", p_max);
    }
  }
  return numeric_l1_weight(law, p_max);
}

Weight build_linfty_weight(const PressureLaw& law, double p_max, Construction construction) {
  check_scan_range(p_max);
  const auto qmin = scan([&](double p) { return law.q_prime(p); }, p_max, Extremum::Min);
  if (!(qmin.value > -1.0)) {
    std::ostringstream os;
    os << "q' = " << qmin.value << " <= -1 at p = " << qmin.argument;
    throw HypothesisViolation("LINF_NO_G_B2", os.str());
  }
  if (construction == Construction::Auto) {
    if (law.kind() == PressureLaw::Kind::PowerLaw) {
      Weight::Functions f{[](double) { return 1.0; }, [](double) { return 0.0; },
                          [](double) { return 0.0; }};
      return Weight(std::move(f), Provenance::LInftyODE, true, "linfty-power-law", p_max);
    }
    if (law.kind() == PressureLaw::Kind::DHV) {
      // u = 1/h = 2 f(x) / x^2 with f(x) = x - log(1+x), x = p / eps.
      const double e = law.parameter();
      struct U {
        double v, d1, d2;
      };
      auto u_of = [](double x) {
        if (x < 0.5) {
          // u = sum_{k>=2} (-1)^k 2 x^{k-2} / k
          U r{0.0, 0.0, 0.0};
          double xp = 1.0;  // x^{k-2}
          for (int k = 2; k < 80; ++k) {
            const double ck = (k % 2 == 0 ? 2.0 : -2.0) / k;
            r.v += ck * xp;
            if (k >= 3) r.d1 += ck * (k - 2) * xp / x;
            if (k >= 4) r.d2 += ck * (k - 2) * (k - 3) * xp / (x * x);
            xp *= x;
          }
          if (x == 0.0) r = U{1.0, -2.0 / 3.0, 1.0};
          return r;
        }
        const double f = x - std::log1p(x);
        const double f1 = x / (1.0 + x);
        const double f2 = 1.0 / ((1.0 + x) * (1.0 + x));
        return U{2.0 * f / (x * x), 2.0 * f1 / (x * x) - 4.0 * f / (x * x * x),
                 2.0 * f2 / (x * x) - 8.0 * f1 / (x * x * x) + 12.0 * f / (x * x * x * x)};
      };
      Weight::Functions f{
          [e, u_of](double p) { return 1.0 / u_of(p / e).v; },
          [e, u_of](double p) {
            const U u = u_of(p / e);
            return -u.d1 / (u.v * u.v) / e;
          },
          [e, u_of](double p) {
            const U u = u_of(p / e);
            return (2.0 * u.d1 * u.d1 - u.v * u.d2) / (u.v * u.v * u.v) / (e * e);
          }};
      return Weight(std::move(f), Provenance::LInftyODE, true, "linfty-dhv", p_max);
    }
  }
  return numeric_linfty_weight(law, p_max);
}

Weight published_dhv_linfty_weight(double e, double p_max) {
  if (!(e > 0.0)) throw DomainError("epsilon must be positive");
  Weight::Functions f{[e](double p) { return 1.0 + p - e * std::log1p(p / e); },
                      [e](double p) { return p / (p + e); },
                      [e](double p) { return e / ((p + e) * (p + e)); }};
  return Weight(std::move(f), Provenance::LInftyODE, true, "linfty-dhv-published", p_max);
}

double hprime_q_over_h(const PressureLaw& law, const Weight& w, double p) {
  if (p > 0.0) {
    const double h = w.h(p);
    if (h > 0.0) return w.h_prime(p) * law.q(p) / h;
  }
  switch (w.provenance()) {
    case Provenance::L1Construction: return 1.0 + law.q_prime(0.0);
    case Provenance::UserPoly: return w.leading_power() * law.q_prime(0.0);
    default: return 0.0;
  }
}

double alpha1(const PressureLaw& law, const Weight& w, int N, double p) {
  if (p <= 0.0) return 0.0;
  return w.h_prime(p) * law.q(p) - w.h(p) * (1.0 - 1.0 / N);
}

double alpha1_integral_form(const PressureLaw& law, const Weight& w, int N, double p) {
  return numerics::adaptive_simpson(
      [&](double r) { return law.q(r) * w.h_prime(r) + w.h(r) / N; }, 0.0, p, 1e-14);
}

double l1_constant_A(const Weight& w, const std::function<double(double)>& alpha1_fn,
                     const Field& pressure) {
  double sum = 0.0;
  for (std::size_t i = 0; i < pressure.size(); ++i) {
    const double p = pressure[i];
    if (!(p > 0.0)) continue;
    const double a = alpha1_fn(p);
    const double h = w.h(p);
    if (!(a > 0.0)) {
      if (h == 0.0) continue;  // both vanish (underflow); the limit is 0
      std::ostringstream os;
      os << "alpha1 = " << a << " <= 0 at p = " << p;
      throw HypothesisViolation("L1_NO_G", os.str());
    }
    sum += h * h / a;
  }
  return 0.5 * sum * pressure.grid.cell_volume();
}

double delta1_bar(const PressureLaw& law, const GrowthLaw& growth, const Weight& w, int N,
                  double p_max) {
  check_scan_range(p_max);
  if (growth.is_zero()) return 0.0;
  const double c = 2.0 * (N - 2.0) / N;
  auto f = [&](double p) {
    return growth.g(p) * (c - hprime_q_over_h(law, w, p)) + growth.g_prime(p) * law.q(p);
  };
  return scan(f, p_max, Extremum::Max).value;
}

LinftyMargins linfty_bounds_check(const PressureLaw& law, const Weight& w, double p_max) {
  check_scan_range(p_max);
  const double c = 1.0 + law.q_prime(0.0);
  constexpr int kSub = 4;  // q' sampled finer than h for the running extremes
  double run_min = law.q_prime(0.0), run_max = run_min;
  LinftyMargins m{std::numeric_limits<double>::infinity(),
                  std::numeric_limits<double>::infinity(), 0.0, 0.0};
  for (int i = 0; i <= kScanIntervals; ++i) {
    const double p = p_max * i / kScanIntervals;
    if (i > 0) {
      for (int s = 1; s <= kSub; ++s) {
        const double r = p_max * ((i - 1) * kSub + s) / (kScanIntervals * kSub);
        const double qp = law.q_prime(r);
        run_min = std::min(run_min, qp);
        run_max = std::max(run_max, qp);
      }
    }
    const double h = w.h(p);
    const double lower = h - (1.0 + run_min) / c;
    const double upper = (1.0 + run_max) / c - h;
    if (lower < m.lower_margin) {
      m.lower_margin = lower;
      m.lower_at = p;
    }
    if (upper < m.upper_margin) {
      m.upper_margin = upper;
      m.upper_at = p;
    }
  }
  return m;
}

bool branch_hypothesis_holds(const PressureLaw& law, double p_max, Branch branch) {
  if (branch == Branch::Ratio) {
    // (q/p)' >= 0  <=>  p q' - q >= 0
    auto f = [&](double p) {
      const double a = p * law.q_prime(p), b = law.q(p);
      return (a - b) / (1.0 + std::abs(a) + std::abs(b));
    };
    return scan(f, p_max, Extremum::Min).value >= -1e-12;
  }
  return scan([&](double p) { return law.q_prime(p); }, p_max, Extremum::Min).value > -1.0;
}

double alpha_tilde_0(const PressureLaw& law, double p_max, Branch branch, int N) {
  check_scan_range(p_max);
  const std::string theorem = branch == Branch::Ratio ? "LINF_NO_G_B1" : "LINF_NO_G_B2";
  if (!branch_hypothesis_holds(law, p_max, branch)) {
    throw HypothesisViolation(theorem, branch == Branch::Ratio
                                           ? "(q/p)' >= 0 fails on the scan"
                                           : "q' > -1 fails on the scan");
  }
  double value;
  if (branch == Branch::Ratio) {
    auto f = [&](double p) { return p <= 0.0 ? 1.0 : p * law.q_prime(p) / law.q(p); };
    value = scan(f, p_max, Extremum::Min).value;
  } else {
    auto qp = [&](double p) { return law.q_prime(p); };
    const double qmin = scan(qp, p_max, Extremum::Min).value;
    const double qmax = scan(qp, p_max, Extremum::Max).value;
    const double d = 1.0 + qmax;
    value = qmin / d + (2.0 / N) * (1.0 + law.q_prime(0.0)) / (d * d);
  }
  if (!(value > 0.0)) {
    throw HypothesisViolation(theorem, "alpha_tilde_0 = " + std::to_string(value) + " <= 0");
  }
  return value;
}

SpecialCase special_case_alpha0(const PressureLaw& law, const GrowthLaw& growth, int N,
                                double p_max) {
  check_scan_range(p_max);
  const auto q2 = scan([&](double p) { return law.q_second(p); }, p_max, Extremum::Min);
  if (q2.value < -1e-12) {
    std::ostringstream os;
    os << "q'' = " << q2.value << " < 0 at p = " << q2.argument;
    throw HypothesisViolation("LINF_SPECIAL", os.str());
  }
  SpecialCase out;
  const auto a = scan([&](double p) { return law.q_prime(p) + 2.0 / N; }, p_max, Extremum::Min);
  out.alpha0 = a.value;
  out.alpha0_at = a.argument;
  if (!growth.is_zero()) {
    auto f = [&](double p) {
      return growth.g_prime(p) * law.q(p) - (4.0 / N + law.q_prime(p)) * growth.g(p);
    };
    const auto d = scan(f, p_max, Extremum::Max);
    out.delta_bar = d.value;
    out.delta_bar_at = d.argument;
  }
  return out;
}

double alpha2(const PressureLaw& law, const Weight& w, int N, double p) {
  return 4.0 / N + 2.0 * hprime_q_over_h(law, w, p) - 2.0 + law.q_prime(p);
}

double beta2(const PressureLaw& law, const Weight& w, double p) {
  // Weights vanishing at 0 are evaluated just inside the range there.
  if (w.h(p) <= 0.0) p = std::max(p, 1e-6 * w.p_max());
  const double h = w.h(p);
  return (w.h_second(p) * law.q(p) + law.q_second(p) * h - w.h_prime(p)) / h;
}

double delta2(const PressureLaw& law, const GrowthLaw& growth, const Weight& w, int N,
              double p) {
  if (growth.is_zero()) return 0.0;
  const double G = growth.g(p);
  return 2.0 * growth.g_prime(p) * law.q(p) +
         G * (2.0 * (1.0 - 4.0 / N) - hprime_q_over_h(law, w, p) - law.q_prime(p));
}

CoefficientReport l2_coefficients(const PressureLaw& law, const GrowthLaw& growth,
                                  const Weight& w, int N, double p_max) {
  check_scan_range(p_max);
  CoefficientReport r;
  r.scan_resolution = kScanIntervals;
  const auto a = scan([&](double p) { return alpha2(law, w, N, p); }, p_max, Extremum::Min);
  r.alpha_min = a.value;
  r.alpha_argmin = a.argument;
  r.beta_max = scan([&](double p) { return beta2(law, w, p); }, p_max, Extremum::Max).value;
  r.beta_max_abs =
      scan([&](double p) { return std::abs(beta2(law, w, p)); }, p_max, Extremum::Max).value;
  r.delta_bar = growth.is_zero()
                    ? 0.0
                    : scan([&](double p) { return delta2(law, growth, w, N, p); }, p_max,
                           Extremum::Max)
                          .value;
  return r;
}

double beta_residual(const PressureLaw& law, const Weight& w, Family family, double p) {
  const double q = law.q(p);
  switch (family) {
    case Family::L1:
      if (p <= 0.0) return 0.0;  // q h'' -> 0 and h'(0) = 0
      return q * w.h_second(p) - w.h_prime(p);
    case Family::LInfty: {
      const double h = w.h(p), h1 = w.h_prime(p), h2 = w.h_second(p);
      const double r = h1 / h;
      return law.q_second(p) - q * h2 / h + 2.0 * q * r * r - 2.0 * law.q_prime(p) * r - r;
    }
    case Family::L2:
      return beta2(law, w, p);
  }
  return 0.0;
}

double delta_infty(const PressureLaw& law, const GrowthLaw& growth, const Weight& w, int N,
                   double p) {
  if (growth.is_zero()) return 0.0;
  const double G = growth.g(p);
  return growth.g_prime(p) * law.q(p) - (4.0 / N + law.q_prime(p)) * G +
         hprime_q_over_h(law, w, p) * G;
}

double delta_infty_bar(const PressureLaw& law, const GrowthLaw& growth, const Weight& w, int N,
                       double p_max) {
  check_scan_range(p_max);
  if (growth.is_zero()) return 0.0;
  return scan([&](double p) { return delta_infty(law, growth, w, N, p); }, p_max, Extremum::Max)
      .value;
}

std::function<double(double)> time_bound(TimeBoundKind kind, double constant, double delta) {
  return [=](double t) {
    if (!(t > 0.0)) throw DomainError("time bound needs t > 0");
    switch (kind) {
      case TimeBoundKind::InverseT: return constant / t;
      case TimeBoundKind::InverseT2: return constant / (t * t);
      case TimeBoundKind::ExpSaturating: {
        const double x = delta * t;
        if (std::abs(x) < 1e-8) return constant / t * (1.0 + 0.5 * x);
        return constant * delta / -std::expm1(-x);
      }
    }
    return 0.0;
  };
}

}  // namespace ablab
