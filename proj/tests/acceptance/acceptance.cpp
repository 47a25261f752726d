// Acceptance checks. Each criterion prints one line:
//   criterion <k> PASS|FAIL <title>: <measurements> (<runtime> s, limit <limit> s)
// and the process exits nonzero if any selected criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ablab/cli.hpp"
#include "ablab/oracles.hpp"
#include "ablab/weights.hpp"
#include "support/generators.hpp"

using namespace ablab;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!ok) detail << "[failed: " << what << "] ";
  }
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

ScenarioConfig bump_scenario(double gamma, double t_end) {
  ScenarioConfig c;
  c.law.gamma = gamma;
  c.grid = Grid(1, 10.0, 256, Boundary::NoFlux);
  c.initial.kind = InitialKind::Bump;
  c.initial.radius = 1.0;
  c.initial.height = 1.0;
  c.t_end = t_end;
  c.snapshot_count = 50;
  return c;
}

const TheoremOutcome& outcome(const RunOutcome& r, const std::string& id) {
  for (const auto& t : r.theorems) {
    if (t.id == id) return t;
  }
  throw std::runtime_error("no outcome for " + id);
}

double constant(const TheoremOutcome& t, const std::string& name) {
  for (const auto& [k, v] : t.constants) {
    if (k == name) return v;
  }
  throw std::runtime_error("no constant " + name + " in " + t.id);
}

// 1. Numerically built weights against the published closed forms.
void weights_match_closed_forms(Verdict& v) {
  double worst_l1 = 0.0, worst_pl_inf = 0.0, worst_beta = 0.0;
  std::vector<double> worst_dhv_inf;
  for (double g : {1.0, 2.0, 5.0}) {
    const auto law = PressureLaw::power_law(g);
    const auto l1 = build_l1_weight(law, 1.0, Construction::Numeric);
    const auto li = build_linfty_weight(law, 1.0, Construction::Numeric);
    for (int i = 0; i <= 200; ++i) {
      const double p = 0.01 + 0.99 * i / 200.0;
      worst_l1 = std::max(worst_l1, rel(l1.h(p), g / (g + 1.0) * std::pow(p, (g + 1.0) / g)));
      worst_pl_inf = std::max(worst_pl_inf, std::abs(li.h(p) - 1.0));
      const double scale1 = 1.0 + std::abs(law.q(p) * l1.h_second(p)) + std::abs(l1.h_prime(p));
      worst_beta = std::max(worst_beta, std::abs(beta_residual(law, l1, Family::L1, p)) / scale1);
      worst_beta = std::max(worst_beta, std::abs(beta_residual(law, li, Family::LInfty, p)));
    }
  }
  for (double e : {1.0, 0.5, 0.1}) {
    const auto law = PressureLaw::dhv(e);
    const auto l1 = build_l1_weight(law, 1.0, Construction::Numeric);
    const auto li = build_linfty_weight(law, 1.0, Construction::Numeric);
    const auto published = published_dhv_linfty_weight(e);
    double w = 0.0;
    for (int i = 0; i <= 200; ++i) {
      const double p = 0.01 + 0.99 * i / 200.0;
      worst_l1 = std::max(worst_l1, rel(l1.h(p), e * p - e * e * std::log1p(p / e)));
      w = std::max(w, rel(li.h(p), published.h(p)));
      const double scale1 = 1.0 + std::abs(law.q(p) * l1.h_second(p)) + std::abs(l1.h_prime(p));
      const double scalei = 1.0 + std::abs(law.q(p) * li.h_second(p)) + std::abs(li.h_prime(p));
      worst_beta = std::max(worst_beta, std::abs(beta_residual(law, l1, Family::L1, p)) / scale1);
      worst_beta = std::max(worst_beta, std::abs(beta_residual(law, li, Family::LInfty, p)) / scalei);
    }
    worst_dhv_inf.push_back(w);
  }
  v.detail << "L1 max rel err " << worst_l1 << ", power-law Linf max err " << worst_pl_inf
           << ", singular-law Linf rel err vs published form (eps=1,0.5,0.1) " << worst_dhv_inf[0]
           << ", " << worst_dhv_inf[1] << ", " << worst_dhv_inf[2] << ", max scaled beta residual "
           << worst_beta << "; ";
  v.require(worst_l1 <= 1e-7, "L1 weights within 1e-7");
  v.require(worst_pl_inf <= 1e-7, "power-law Linf weight within 1e-7");
  for (double w : worst_dhv_inf) v.require(w <= 1e-7, "singular-law Linf weight within 1e-7 of the published form");
  v.require(worst_beta <= 1e-6, "beta residuals within 1e-6");
}

// 2. Envelope of the ODE weight for random tabulated laws.
void lemma_envelope(Verdict& v) {
  gen::Source s(2024);
  double worst = INFINITY;
  for (int k = 0; k < 50; ++k) {
    const auto law = gen::tabulated_law(s, -0.9, 5.0);
    const auto m = linfty_bounds_check(law, build_linfty_weight(law, 1.0), 1.0);
    worst = std::min({worst, m.lower_margin, m.upper_margin});
  }
  v.detail << "50 laws, worst envelope margin " << worst << "; ";
  v.require(worst >= -1e-6, "margin >= -1e-6");
}

// 3. Barenblatt: min_w t near -N/(N gamma + 2) and the ratio branch holds.
void barenblatt_sharpness(Verdict& v) {
  ScenarioConfig c;
  c.law.gamma = 2.0;
  c.grid = Grid(1, 10.0, 256, Boundary::NoFlux);
  c.initial.kind = InitialKind::Barenblatt;
  c.initial.t0 = 1.0;
  c.t_end = 4.0;
  c.snapshot_count = 50;
  c.theorems = {"LINF_NO_G_B1"};
  const auto r = run_scenario(c);
  const auto& d = r.result.diagnostics;
  double lo = INFINITY, hi = -INFINITY, worst_margin = INFINITY;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double mt = d.min_w[i] * d.times[i];
    lo = std::min(lo, mt);
    hi = std::max(hi, mt);
    worst_margin = std::min(worst_margin, d.min_w[i] + 1.0 / (2.0 * d.times[i]));
  }
  const auto& b1 = outcome(r, "LINF_NO_G_B1");
  v.detail << "min_w*t in [" << lo << ", " << hi << "] (target -0.25 +-10%), worst margin vs -1/(2t) "
           << worst_margin << " over all " << d.size() << " snapshots, checker worst margin "
           << b1.report.worst_margin << "; ";
  v.require(lo >= -0.275 && hi <= -0.225, "min_w*t within 10% of -1/4");
  v.require(worst_margin > 0.0, "strictly positive margin at every snapshot");
  v.require(b1.report.passed && b1.report.worst_margin > 0.0, "bound check passes");
}

// 4. L1 decay from bump data.
void l1_decay(Verdict& v) {
  auto c = bump_scenario(2.0, 2.0);
  c.theorems = {"L1_NO_G"};
  const auto r = run_scenario(c);
  const auto& t = outcome(r, "L1_NO_G");
  const double r2 = constant(t, "r_squared");
  v.detail << "A = " << constant(t, "A") << ", worst relative margin " << t.report.worst_relative
           << " (tolerance 0.1), C_fit = " << constant(t, "C_fit") << ", r^2 = " << r2 << "; ";
  v.require(t.report.passed, "L1 functional <= A/t within 10%");
  v.require(r2 >= 0.9, "r^2 >= 0.9");
}

// 5. Scaling of A with gamma and epsilon on a fixed Barenblatt snapshot.
void a_scaling(Verdict& v) {
  const BarenblattParams b(2.0, 1, 10.0);
  const Grid grid(1, 20.0, 4096, Boundary::NoFlux);
  Field p = barenblatt_pressure(b, grid, 1.0);
  const double pmax = *std::max_element(p.values.begin(), p.values.end());
  auto A_of = [&](const PressureLaw& law) {
    const auto w = build_l1_weight(law, pmax);
    return l1_constant_A(w, [&](double s) { return alpha1(law, w, 1, s); }, p);
  };
  std::vector<double> lg, la, le, lb;
  for (double g : {4.0, 8.0, 16.0, 32.0}) {
    lg.push_back(std::log(g));
    la.push_back(std::log(A_of(PressureLaw::power_law(g, pmax))));
  }
  for (double e : {0.4, 0.2, 0.1, 0.05}) {
    le.push_back(std::log(e));
    lb.push_back(std::log(A_of(PressureLaw::dhv(e, pmax))));
  }
  const double sg = numerics::fit_line(lg, la).slope, se = numerics::fit_line(le, lb).slope;
  v.detail << "slope vs gamma " << sg << " (target -1 +-0.15), slope vs eps " << se
           << " (target 2 +-0.2), snapshot peak pressure " << pmax << "; ";
  v.require(std::abs(sg + 1.0) <= 0.15, "gamma slope");
  v.require(std::abs(se - 2.0) <= 0.2, "epsilon slope");
}

// 6. L2 feasibility frontier with h = 1.
void l2_frontier(Verdict& v) {
  int agree = 0, total = 0;
  const auto one = Weight::identity();
  for (double g : {0.5, 1.0, 1.5, 2.0, 3.0}) {
    for (int N : {1, 2, 3, 4}) {
      const auto r = l2_coefficients(PressureLaw::power_law(g), GrowthLaw::zero(), one, N, 1.0);
      const bool feasible = r.alpha_min >= -1e-12;
      const bool expected = g >= 2.0 - 4.0 / N - 1e-12;
      agree += feasible == expected;
      ++total;
    }
  }
  double worst_beta = 0.0;
  for (double e : {1.0, 0.5, 0.1}) {
    const auto r = l2_coefficients(PressureLaw::dhv(e), GrowthLaw::zero(), one, 1, 1.0);
    worst_beta = std::max(worst_beta, rel(r.beta_max, 2.0 / e));
  }
  v.detail << agree << "/" << total << " grid points agree with gamma >= 2 - 4/N, singular law max beta2 "
           << "matches 2/eps to " << worst_beta << "; ";
  v.require(agree == total, "frontier");
  v.require(worst_beta <= 1e-9, "singular-law beta2 = 2/eps > 0");
}

// 7. Aronson blow-up.
void aronson_blowup(Verdict& v) {
  const auto coarse = aronson_reference(2.0, 1024, 1.0);
  const auto fine = aronson_reference(2.0, 2048, 1.0);
  const auto fc = blowup_fit(coarse.times, coarse.max_pxx, 10.0, 0.5);
  const auto ff = blowup_fit(fine.times, fine.max_pxx, 10.0, 0.5);
  v.require(fc.triggered && ff.triggered, "blow-up detected");
  if (!fc.triggered || !ff.triggered) return;
  double peak = 0.0;
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    if (coarse.times[i] < fc.T) peak = std::max(peak, coarse.max_pxx[i]);
  }
  const double ratio = peak / coarse.max_pxx.front();
  const double change = rel(fc.T, ff.T);
  v.detail << "T_est 1024 cells " << fc.T << ", 2048 cells " << ff.T << " (change " << change
           << "), candidates 1/(2g) = 0.25, 1/(2(g+1)) = " << 1.0 / 6.0 << ", 1/(2g+4) = 0.125"
           << ", peak max p_xx before T_est " << peak << " = " << ratio << " x initial; ";
  v.require(change < 0.05, "T_est stable to 5%");
  v.require(ratio > 50.0, "peak > 50x initial");
}

// 8. Complementarity residual in the stiff limit.
void incompressible_limit(Verdict& v) {
  SweepConfig s;
  s.base = bump_scenario(5.0, 1.0);
  s.base.growth.kind = "linear";
  s.base.growth.rate = 1.0;
  s.base.growth.p_max = 1.0;
  s.base.snapshot_count = 11;
  s.parameter = "gamma";
  s.values = {5.0, 10.0, 20.0, 40.0};
  s.parallelism = 2;
  const auto rows = run_sweep(s);
  std::vector<double> r1;
  for (const auto& row : rows) r1.push_back(row.outcome.result.diagnostics.complementarity_r1.back());
  bool decreasing = true;
  for (std::size_t i = 1; i < r1.size(); ++i) decreasing = decreasing && r1[i] < r1[i - 1];
  v.detail << "r1 = " << r1[0] << ", " << r1[1] << ", " << r1[2] << ", " << r1[3]
           << ", ratio " << r1[3] / r1[0] << "; ";
  v.require(decreasing, "strictly decreasing");
  v.require(r1[3] / r1[0] < 0.3, "ratio < 0.3");
}

// 9. Conservation and determinism.
void conservation(Verdict& v) {
  SimState s;
  s.law = PressureLaw::power_law(2.0);
  const Grid g(1, 10.0, 128, Boundary::Periodic);
  gen::Source src(9);
  s.n = gen::bump_field(src, g, 0.9);
  double m0 = 0.0;
  for (double x : s.n.values) m0 += x;
  for (int k = 0; k < 10000; ++k) s = step_density(s, admissible_dt(s, 0.45));
  double m1 = 0.0;
  for (double x : s.n.values) m1 += x;
  const double drift = std::abs(m1 - m0) / m0;

  auto c = bump_scenario(2.0, 0.5);
  auto csv = [&](kernels::Backend b) {
    c.backend = b;
    std::ostringstream os;
    simulate(c).diagnostics.write_csv(os);
    return os.str();
  };
  const std::string a = csv(kernels::Backend::Serial), b = csv(kernels::Backend::Serial),
                    o = csv(kernels::Backend::OpenMP);
  v.detail << "relative mass drift over 1e4 steps " << drift << ", repeat run identical "
           << (a == b ? "yes" : "no") << ", OpenMP run identical " << (a == o ? "yes" : "no")
           << "; ";
  v.require(drift <= 1e-12, "drift <= 1e-12");
  v.require(a == b && a == o, "byte-identical diagnostics");
}

// 10. Linear growth against the saturating bound.
void with_growth(Verdict& v) {
  auto c = bump_scenario(2.0, 1.0);
  c.growth.kind = "linear";
  c.growth.rate = 1.0;
  c.growth.p_max = 1.0;
  c.theorems = {"LINF_WITH_G"};
  const auto r = run_scenario(c);
  const auto& t = outcome(r, "LINF_WITH_G");
  const double min_margin = *std::min_element(t.report.margin.begin(), t.report.margin.end());
  v.detail << "delta_bar = " << constant(t, "delta_infty_bar") << ", alpha_tilde_0 = "
           << constant(t, "alpha_tilde_0") << ", " << t.report.margin.size()
           << " post-warmup samples, smallest margin " << min_margin << "; ";
  v.require(t.report.passed, "bound check passes within 10%");
  v.require(min_margin > 0.0, "positive margins");
}

struct Criterion {
  int id;
  const char* title;
  double limit_s;
  std::function<void(Verdict&)> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "weight correctness", 1.0, weights_match_closed_forms},
      {2, "lemma envelope", 10.0, lemma_envelope},
      {3, "Barenblatt sharpness", 30.0, barenblatt_sharpness},
      {4, "L1 decay", 60.0, l1_decay},
      {5, "scaling of A", 60.0, a_scaling},
      {6, "L2 feasibility frontier", 1.0, l2_frontier},
      {7, "Aronson blow-up", 120.0, aronson_blowup},
      {8, "incompressible limit", 300.0, incompressible_limit},
      {9, "conservation and determinism", 30.0, conservation},
      {10, "bound with growth", 60.0, with_growth},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks, one line per criterion"};
  std::vector<int> selected;
  app.add_option("-c,--criterion", selected, "Criterion number(s) to run (default: all)")
      ->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  bool all_pass = true;
  for (const auto& c : criteria()) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) {
      continue;
    }
    Verdict v;
    v.detail.precision(6);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    v.require(secs <= c.limit_s, "runtime limit");
    std::printf("criterion %d %s %s: %s(%.2f s, limit %.0f s)\n", c.id, v.pass ? "PASS" : "FAIL",
                c.title, v.detail.str().c_str(), secs, c.limit_s);
    std::fflush(stdout);
    all_pass = all_pass && v.pass;
  }
  return all_pass ? 0 : 1;
}
