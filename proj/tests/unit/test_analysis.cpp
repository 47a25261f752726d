#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ablab/analysis.hpp"
#include "ablab/errors.hpp"
#include "ablab/oracles.hpp"
#include "support/generators.hpp"

using namespace ablab;
using doctest::Approx;

TEST_SUITE("analysis") {

TEST_CASE("w field") {
  const Grid g(1, 1.0, 32, Boundary::NoFlux);
  Field p(g, Quantity::Pressure);
  for (double v : w_field(p, GrowthLaw::zero()).values) CHECK(v == 0.0);
  for (int i = 0; i < g.cells; ++i) p[i] = 3.0 * g.center(i) * g.center(i);
  const Field w = w_field(p, GrowthLaw::zero());
  for (int i = 1; i < g.cells - 1; ++i) CHECK(w[i] == Approx(6.0).epsilon(1e-9));
  CHECK(w.quantity == Quantity::W);
}

TEST_CASE("w of Barenblatt inside the support") {
  for (int N : {1, 2}) {
    const BarenblattParams b(2.0, N, 1.0);
    const Grid g(N, 10.0, 256, Boundary::NoFlux);
    const double t = 1.5;
    const Field p = barenblatt_pressure(b, g, t);
    const Field w = w_field(p, GrowthLaw::zero());
    const double r = b.support_radius(t);
    for (std::size_t k = 0; k < p.size(); ++k) {
      const int i = static_cast<int>(k % g.cells), j = static_cast<int>(k / g.cells);
      const double x = g.center(i) - 5.0, y = N == 2 ? g.center(j) - 5.0 : 0.0;
      if (std::sqrt(x * x + y * y) < 0.8 * r) {
        CHECK(w[k] * t == Approx(-double(N) / (N * 2.0 + 2.0)).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("negative part") {
  const Grid g(1, 1.0, 16, Boundary::NoFlux);
  Field f(g, Quantity::W);
  for (auto& v : f.values) v = 2.0;
  for (double v : neg_part(f).values) CHECK(v == 0.0);
  for (auto& v : f.values) v = -3.0;
  for (double v : neg_part(f).values) CHECK(v == 3.0);
}

TEST_CASE("property: negative part reconstructs the absolute value") {
  gen::Source s(51);
  const Grid g(1, 1.0, 256, Boundary::NoFlux);
  Field f(g, Quantity::W);
  for (auto& v : f.values) v = s.uniform(-5.0, 5.0);
  const Field m = neg_part(f);
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(m[i] == std::max(0.0, -f[i]));
    CHECK(m[i] + std::max(0.0, f[i]) == std::abs(f[i]));
  }
}

TEST_CASE("weighted functionals") {
  const Grid g(1, 4.0, 8, Boundary::NoFlux);  // dx = 0.5
  Field p(g, Quantity::Pressure), w(g, Quantity::W);
  for (auto& v : w.values) v = 1.0;
  const auto id = Weight::identity();
  const auto zero = weighted_functionals(p, w, id, full_mask(g));
  CHECK(zero.l1 == 0.0);
  CHECK(zero.l2 == 0.0);
  CHECK(zero.sup == 0.0);
  w[3] = -3.0;
  const auto two = Weight::polynomial({2.0});
  const auto one = weighted_functionals(p, w, two, full_mask(g));
  CHECK(one.l1 == Approx(3.0));
  CHECK(one.l2 == Approx(9.0));
  CHECK(one.sup == Approx(6.0));
}

TEST_CASE("property: identity weight on the full mask gives plain norms") {
  gen::Source s(52);
  for (int k = 0; k < 20; ++k) {
    const Grid g(1 + k % 2, 2.0, 32, Boundary::Periodic);
    Field p(g, Quantity::Pressure), w(g, Quantity::W);
    double l1 = 0.0, l2 = 0.0, sup = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      p[i] = s.uniform(0.0, 1.0);
      w[i] = s.uniform(-2.0, 1.0);
      const double m = std::max(0.0, -w[i]);
      l1 += m;
      l2 += m * m;
      sup = std::max(sup, m);
    }
    const auto f = weighted_functionals(p, w, Weight::identity(), full_mask(g));
    CHECK(f.l1 == Approx(l1 * g.cell_volume()).epsilon(1e-13));
    CHECK(f.l2 == Approx(l2 * g.cell_volume()).epsilon(1e-13));
    CHECK(f.sup == sup);
  }
}

TEST_CASE("positivity mask") {
  const Grid g(1, 1.0, 32, Boundary::NoFlux);
  Field n(g, Quantity::Density);
  for (int i = 10; i < 22; ++i) n[i] = 1.0;
  CHECK(mask_count(positivity_mask(n, 1e-6)) == 12);
  const Mask m = positivity_mask(n, 1e-6, 2);
  CHECK(mask_count(m) == 8);
  CHECK_FALSE(m[11]);
  CHECK(m[12]);
}

TEST_CASE("fit_decay") {
  std::vector<double> t, y1, y2;
  for (int i = 1; i <= 10; ++i) {
    t.push_back(i);
    y1.push_back(5.0 / i);
    y2.push_back(3.0 / (i * i));
  }
  const auto a = fit_decay(t, y1, DecayModel::CoverT);
  CHECK(a.C == Approx(5.0).epsilon(1e-10));
  CHECK(a.r_squared == Approx(1.0));
  const auto b = fit_decay(t, y2, DecayModel::CoverT2);
  CHECK(b.C == Approx(3.0).epsilon(1e-10));
  CHECK(fit_decay(t, y2, DecayModel::CoverT).r_squared < 0.99);
  const std::vector<double> few = {1, 2, 3, 4};
  CHECK_THROWS_AS(fit_decay(few, few, DecayModel::CoverT), InsufficientData);
}

TEST_CASE("property: fit_decay recovers generated constants") {
  gen::Source s(53);
  for (int k = 0; k < 30; ++k) {
    const double C = s.log_uniform(1e-3, 1e3);
    const bool squared = k % 2;
    std::vector<double> t, y;
    for (int i = 0; i < 12; ++i) {
      t.push_back(s.uniform(0.5, 20.0));
      y.push_back(C / (squared ? t.back() * t.back() : t.back()));
    }
    const auto f = fit_decay(t, y, squared ? DecayModel::CoverT2 : DecayModel::CoverT);
    CHECK(f.C == Approx(C).epsilon(1e-10));
  }
}

TEST_CASE("bound_check") {
  const std::vector<double> t = {1, 2, 3, 4};
  const std::vector<double> zero(4, 0.0);
  const auto A = [](double s) { return 2.0 / s; };
  const auto r = bound_check("L1_NO_G", t, zero, A, BoundSense::UpperBoundsSeries);
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(r.margin[i] == Approx(2.0 / t[i]));
  CHECK(r.passed);

  // Barenblatt against the ratio branch: (1/gamma - N/(N gamma + 2))/t.
  const double g = 2.0;
  std::vector<double> minw;
  for (double s : t) minw.push_back(-1.0 / (4.0 * s));
  const auto lb = bound_check("LINF_NO_G_B1", t, minw, [&](double s) { return -1.0 / (g * s); },
                              BoundSense::LowerBoundsMinW);
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(lb.margin[i] == Approx((0.5 - 0.25) / t[i]));
  }
  CHECK(lb.worst_margin > 0.0);

  std::vector<double> bad = {0.1, 0.1, 5.0, 0.1};
  const auto v = bound_check("L1_NO_G", t, bad, A, BoundSense::UpperBoundsSeries);
  CHECK_FALSE(v.passed);
  CHECK(v.worst_time == 3.0);
  CHECK(v.worst_margin == Approx(2.0 / 3.0 - 5.0));
  // Within tolerance counts as a pass.
  std::vector<double> near = {2.1, 1.0, 0.6, 0.5};
  CHECK(bound_check("L1_NO_G", t, near, A, BoundSense::UpperBoundsSeries, 0.1).passed);
}

TEST_CASE("complementarity residual") {
  const Grid g(1, 1.0, 16, Boundary::NoFlux);
  Field p(g, Quantity::Pressure), w(g, Quantity::W), n(g, Quantity::Density);
  for (auto& v : w.values) v = 1.0;
  auto c = complementarity_residual(p, w, n);
  CHECK(c.r1 == 0.0);
  CHECK(c.r2 == 0.0);
  for (auto& v : n.values) v = 1.0;
  for (auto& v : p.values) v = 0.7;
  for (auto& v : w.values) v = 0.0;
  c = complementarity_residual(p, w, n);
  CHECK(c.r1 == 0.0);
  CHECK(c.r2 == 0.0);
  for (auto& v : w.values) v = -2.0;
  CHECK(complementarity_residual(p, w, n).r1 == Approx(1.4));
}

TEST_CASE("blowup_fit") {
  std::vector<double> t, y;
  for (int i = 0; i <= 90; ++i) {
    t.push_back(1.0 + i / 100.0);
    y.push_back(8.0 / (2.0 - t.back()));
  }
  // y grows tenfold only at t = 1.9, so a trigger of 2 leaves a useful window.
  const auto f = blowup_fit(t, y, 2.0);
  REQUIRE(f.triggered);
  CHECK(f.T == Approx(2.0).epsilon(1e-8));
  CHECK(f.C == Approx(8.0).epsilon(1e-6));
  CHECK(f.r_squared == Approx(1.0));
  CHECK(f.T > t.back());

  std::vector<double> decay;
  for (double s : t) decay.push_back(1.0 / s);
  CHECK_FALSE(blowup_fit(t, decay).triggered);
}

TEST_CASE("diagnostics CSV is fixed-format") {
  DiagnosticsSeries d;
  d.times = {0.0, 0.1};
  d.mass = {1.0, 1.0 / 3.0};
  for (auto* v : {&d.min_w, &d.sup_weighted_neg_w, &d.l1_weighted_neg_w, &d.l2_weighted_neg_w_sq,
                  &d.complementarity_r1, &d.complementarity_r2, &d.max_pxx}) {
    *v = {0.0, 0.0};
  }
  std::ostringstream os;
  d.write_csv(os);
  CHECK(os.str().find("0.33333333333333331") != std::string::npos);
  CHECK(format_double(0.1) == "0.10000000000000001");
}

}  // TEST_SUITE
