#include "ablab/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>

#include "ablab/errors.hpp"

namespace ablab {

const std::vector<std::string>& theorem_ids() {
  static const std::vector<std::string> ids = {
      "L1_NO_G",      "L1_WITH_G", "LINF_SPECIAL", "LINF_NO_G_B1", "LINF_NO_G_B2",
      "LINF_WITH_G",  "L2_NO_G",   "L2_WEIGHTED",  "L2_WITH_G"};
  return ids;
}

bool is_theorem_id(const std::string& id) {
  const auto& ids = theorem_ids();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

// What a check measures at each snapshot and how its bound is assembled once
// the trajectory constants are known.
struct TheoremMonitor::Check {
  std::string id;
  std::string bound_form;
  std::string measured_form;
  BoundSense sense = BoundSense::UpperBoundsSeries;
  std::vector<std::pair<std::string, double>> constants;
  std::function<double(const Snapshot&)> measure;
  std::vector<double> measured;
  std::optional<DecayModel> fit;
  // prefactor for the time profile, from the trajectory constants
  std::function<double(const TheoremMonitor&, const Check&)> prefactor;
  TimeBoundKind kind = TimeBoundKind::InverseT;
  double delta = 0.0;
  double time_origin = 0.0;  // exponential growth bounds run from here
  bool exponential_growth = false;
  // Estimates whose constants are sups over the observed trajectory run their
  // clock from the first snapshot. The L-infinity ones use the solution clock.
  bool elapsed_clock = false;
};

namespace {

double scan_min(const std::function<double(double)>& f, double p_max) {
  return numerics::scan_extremum(f, 0.0, p_max, numerics::Extremum::Min, kScanIntervals,
                                 1e-9 * p_max)
      .value;
}
double scan_max(const std::function<double(double)>& f, double p_max) {
  return numerics::scan_extremum(f, 0.0, p_max, numerics::Extremum::Max, kScanIntervals,
                                 1e-9 * p_max)
      .value;
}

void require_zero_growth(const std::string& id, const GrowthLaw& growth) {
  if (!growth.is_zero()) throw HypothesisViolation(id, "this estimate assumes G = 0");
}

Branch pick_branch(const ScenarioConfig& c, const PressureLaw& law, double p_max) {
  switch (c.branch) {
    case BranchChoice::Ratio: return Branch::Ratio;
    case BranchChoice::ODE: return Branch::ODE;
    case BranchChoice::Auto: break;
  }
  return branch_hypothesis_holds(law, p_max, Branch::Ratio) ? Branch::Ratio : Branch::ODE;
}

std::function<double(double)> ratio_factor(const PressureLaw& law) {
  return [law](double p) { return p > 0.0 ? law.q(p) / p : law.q_prime(0.0); };
}

}  // namespace

TheoremMonitor::TheoremMonitor(const ScenarioConfig& config, const PressureLaw& law,
                               const GrowthLaw& growth)
    : config_(config), law_(law), growth_(growth), N_(config.grid.dim) {
  const double pm = law.p_max();
  const double scale = config.bound_scale;
  const double t0 = config.start_time();

  // Weights are shared by the checks that need them.
  std::optional<Weight> l1w;
  auto l1_weight = [&]() -> const Weight& {
    if (!l1w) l1w = build_l1_weight(law, pm);
    return *l1w;
  };

  for (const auto& id : config.theorems) {
    if (!is_theorem_id(id)) throw ConfigError("checks.theorems", 0, "unknown theorem id '" + id + "'");
    Check c;
    c.id = id;

    if (id == "L1_NO_G" || id == "L1_WITH_G") {
      if (id == "L1_NO_G") require_zero_growth(id, growth);
      const Weight w = l1_weight();
      const int N = N_;
      const double amin = scan_min(
          [&](double p) { return p > 0.0 ? alpha1(law, w, N, p) / std::max(w.h(p), 1e-300) : 1.0; },
          pm);
      if (!(amin > 0.0)) throw HypothesisViolation(id, "alpha1 <= 0 for some p > 0");
      c.measured_form = "sum h_L1 |w|_- dx";
      c.measure = [w](const Snapshot& s) {
        return weighted_functionals(*s.p, *s.w, w, *s.mask).l1;
      };
      c.prefactor = [scale](const TheoremMonitor& m, const Check&) { return scale * m.sup_A_; };
      c.elapsed_clock = true;
      if (id == "L1_NO_G") {
        c.bound_form = "A/t";
        c.kind = TimeBoundKind::InverseT;
        c.fit = DecayModel::CoverT;
      } else {
        c.delta = delta1_bar(law, growth, w, N_, pm);
        c.bound_form = "A delta1 e^{delta1 t}/(e^{delta1 t} - 1)";
        c.kind = TimeBoundKind::ExpSaturating;
        c.constants.emplace_back("delta1_bar", c.delta);
      }
    } else if (id == "LINF_SPECIAL") {
      const SpecialCase sc = special_case_alpha0(law, growth, N_, pm);
      if (!(sc.alpha0 > 0.0)) throw HypothesisViolation(id, "alpha0 = q' + 2/N must be positive");
      c.sense = BoundSense::LowerBoundsMinW;
      c.measured_form = "min w";
      c.bound_form = "-(1/alpha0) delta e^{delta t}/(e^{delta t} - 1)";
      c.kind = TimeBoundKind::ExpSaturating;
      c.delta = sc.delta_bar;
      c.constants = {{"alpha0", sc.alpha0}, {"delta_bar", sc.delta_bar}};
      c.measure = [](const Snapshot& s) { return masked_min(*s.p, *s.w, *s.mask); };
      const double k = scale / sc.alpha0;
      c.prefactor = [k](const TheoremMonitor&, const Check&) { return k; };
    } else if (id == "LINF_NO_G_B1" || id == "LINF_NO_G_B2" || id == "LINF_WITH_G") {
      Branch branch = id == "LINF_NO_G_B1" ? Branch::Ratio : Branch::ODE;
      if (id == "LINF_WITH_G") {
        branch = pick_branch(config, law, pm);
      } else {
        require_zero_growth(id, growth);
      }
      const double at0 = alpha_tilde_0(law, pm, branch, N_);
      c.sense = BoundSense::LowerBoundsMinW;
      c.constants.emplace_back("alpha_tilde_0", at0);
      c.constants.emplace_back("branch", branch == Branch::Ratio ? 1.0 : 2.0);
      if (branch == Branch::Ratio) {
        c.measured_form = "min (q/p) w";
        const auto f = ratio_factor(law);
        c.measure = [f](const Snapshot& s) { return masked_min(*s.p, *s.w, *s.mask, f); };
      } else {
        const double qmin = scan_min([&](double p) { return law.q_prime(p); }, pm);
        c.constants.emplace_back("min_q_prime", qmin);
        c.measured_form = "(1 + min q') min w";
        c.measure = [qmin](const Snapshot& s) {
          return (1.0 + qmin) * masked_min(*s.p, *s.w, *s.mask);
        };
      }
      if (id == "LINF_WITH_G") {
        const Weight w = build_linfty_weight(law, pm);
        c.delta = delta_infty_bar(law, growth, w, N_, pm);
        c.constants.emplace_back("delta_infty_bar", c.delta);
        c.kind = TimeBoundKind::ExpSaturating;
        c.bound_form = "-(1/alpha_tilde_0) delta e^{delta t}/(e^{delta t} - 1)";
      } else {
        c.kind = TimeBoundKind::InverseT;
        c.bound_form = "-1/(alpha_tilde_0 t)";
      }
      const double k = scale / at0;
      c.prefactor = [k](const TheoremMonitor&, const Check&) { return k; };
    } else if (id == "L2_NO_G") {
      require_zero_growth(id, growth);
      const double a0 = scan_min([&](double p) { return 2.0 / N_ - 1.0 + 0.5 * law.q_prime(p); }, pm);
      const double q2 = scan_max([&](double p) { return law.q_second(p); }, pm);
      if (q2 > 1e-12) {
        std::ostringstream os;
        os << "q'' <= 0 fails (max q'' = " << q2 << ")";
        throw HypothesisViolation(id, os.str());
      }
      if (!(a0 > 0.0)) {
        std::ostringstream os;
        os << "alpha0 = inf(2/N - 1 + q'/2) = " << a0 << " must be positive for the 1/t^2 decay";
        throw HypothesisViolation(id, os.str());
      }
      c.constants.emplace_back("alpha0", a0);
      c.measured_form = "sum |w|_-^2 dx";
      c.bound_form = "|supp|/(alpha0^2 t^2)";
      c.kind = TimeBoundKind::InverseT2;
      c.fit = DecayModel::CoverT2;
      c.elapsed_clock = true;
      const Weight one = Weight::identity(pm);
      c.measure = [one](const Snapshot& s) {
        return weighted_functionals(*s.p, *s.w, one, *s.mask).l2;
      };
      c.prefactor = [scale, a0](const TheoremMonitor& m, const Check&) {
        return scale * m.sup_support_ / (a0 * a0);
      };
    } else if (id == "L2_WEIGHTED" || id == "L2_WITH_G") {
      if (id == "L2_WEIGHTED") require_zero_growth(id, growth);
      const Weight w = Weight::polynomial(config.l2_weight, pm);
      const double hmin = scan_min([&](double p) { return w.h(p); }, pm);
      if (!(hmin > 0.0)) throw HypothesisViolation(id, "the weight must be bounded below by c > 0");
      const CoefficientReport r = l2_coefficients(law, growth, w, N_, pm);
      if (r.alpha_min < -1e-12) {
        std::ostringstream os;
        os << "alpha2 >= 0 fails (min " << r.alpha_min << " at p = " << r.alpha_argmin << ")";
        throw HypothesisViolation(id, os.str());
      }
      if (r.beta_max > 1e-12) {
        std::ostringstream os;
        os << "beta2 <= 0 fails (max " << r.beta_max << ")";
        throw HypothesisViolation(id, os.str());
      }
      c.constants.emplace_back("alpha2_min", r.alpha_min);
      c.constants.emplace_back("beta2_max", r.beta_max);
      c.measured_form = "sum h |w|_-^2 dx";
      c.measure = [w](const Snapshot& s) {
        return weighted_functionals(*s.p, *s.w, w, *s.mask).l2;
      };
      c.prefactor = [scale](const TheoremMonitor&, const Check& self) {
        return self.measured.empty() ? 0.0 : scale * self.measured.front();
      };
      if (id == "L2_WITH_G") {
        c.delta = r.delta_bar;
        c.constants.emplace_back("delta2_bar", r.delta_bar);
        c.exponential_growth = true;
        c.time_origin = t0;
        c.bound_form = "Y(start) e^{delta2 (t - start)}";
      } else {
        c.bound_form = "Y(start)";
      }
    }
    checks_.push_back(std::move(c));
  }
  l1_weight_ = l1w;
}

TheoremMonitor::~TheoremMonitor() = default;
TheoremMonitor::TheoremMonitor(TheoremMonitor&&) noexcept = default;
TheoremMonitor& TheoremMonitor::operator=(TheoremMonitor&&) noexcept = default;

void TheoremMonitor::observe(const Snapshot& s) {
  times_.push_back(s.time);
  bool need_A = false, need_support = false;
  for (auto& c : checks_) {
    c.measured.push_back(c.measure(s));
    if (c.id == "L1_NO_G" || c.id == "L1_WITH_G") need_A = true;
    if (c.id == "L2_NO_G") need_support = true;
  }
  if (need_A) {
    const Weight& w = *l1_weight_;
    const double a = l1_constant_A(
        w, [&](double p) { return alpha1(law_, w, N_, p); }, *s.p);
    sup_A_ = std::max(sup_A_, a);
  }
  if (need_support) {
    const Mask support = positivity_mask(*s.n, config_.mask_threshold, 0);
    sup_support_ = std::max(sup_support_,
                            static_cast<double>(mask_count(support)) * s.n->grid.cell_volume());
  }
}

std::vector<TheoremOutcome> TheoremMonitor::finish() const {
  std::vector<TheoremOutcome> out;
  if (times_.empty()) return out;
  const double start = times_.front();
  const double cutoff = start + config_.warmup * (times_.back() - start);
  for (const auto& c : checks_) {
    TheoremOutcome o;
    o.id = c.id;
    o.bound_form = c.bound_form;
    o.measured_form = c.measured_form;
    o.constants = c.constants;
    const double k = c.prefactor(*this, c);
    if (c.id == "L1_NO_G" || c.id == "L1_WITH_G") o.constants.emplace_back("A", k);
    if (c.id == "L2_NO_G") {
      o.constants.emplace_back("support_measure", sup_support_);
      o.constants.emplace_back("C", k);
    }
    if (c.id == "L2_WEIGHTED" || c.id == "L2_WITH_G") o.constants.emplace_back("Y_start", k);

    std::vector<double> t, y;
    const double shift = c.elapsed_clock ? start : 0.0;
    for (std::size_t i = 0; i < times_.size(); ++i) {
      const double tt = times_[i] - shift;
      if (times_[i] < cutoff || !(tt > 0.0)) continue;
      t.push_back(tt);
      y.push_back(c.measured[i]);
    }
    if (c.elapsed_clock) o.constants.emplace_back("clock_origin", start);
    std::function<double(double)> bound;
    const double sign = c.sense == BoundSense::LowerBoundsMinW ? -1.0 : 1.0;
    if (c.exponential_growth) {
      const double d = c.delta, origin = c.time_origin;
      bound = [k, d, origin](double tt) { return k * std::exp(d * (tt - origin)); };
    } else if (c.id == "L2_WEIGHTED") {
      bound = [k](double) { return k; };
    } else {
      const auto profile = time_bound(c.kind, k, c.delta);
      bound = [profile, sign](double tt) { return sign * profile(tt); };
    }
    o.report = bound_check(c.id, t, y, bound, c.sense, config_.tolerance);
    if (c.fit) {
      try {
        const DecayFit f = fit_decay(t, y, *c.fit);
        o.constants.emplace_back("C_fit", f.C);
        o.constants.emplace_back("r_squared", f.r_squared);
      } catch (const InsufficientData&) {
        // too few positive samples to fit; the bound check stands alone
      }
    }
    out.push_back(std::move(o));
  }
  return out;
}

bool all_passed(const std::vector<TheoremOutcome>& outcomes) {
  return std::all_of(outcomes.begin(), outcomes.end(),
                     [](const TheoremOutcome& o) { return o.report.passed; });
}

}  // namespace ablab
