#include "ablab/pressure_law.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "ablab/errors.hpp"

namespace ablab {

namespace {

constexpr int kTableIntervals = 4096;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be positive");
  }
}

}  // namespace

// For a tabulated q, log n(p) = (1/a) log(p / p_max) + g(p) - g(p_max) with
// a = q'(0) and g(p) = int_0^p (1/q(r) - 1/(a r)) dr, which is regular at 0.
struct PressureLaw::Table {
  numerics::Pchip q;
  double a = 0.0;
  double g0_slope = 0.0;  // limit of 1/q - 1/(a r) as r -> 0
  double dp = 0.0;
  std::vector<double> g;    // g at nodes
  std::vector<double> phi;  // int_0^{p_k} n(r) dr at nodes

  double g_integrand(double r) const {
    if (r <= 0.0) return g0_slope;
    return -q.excess_over_start_tangent(r) / (a * r * q(r));
  }
  std::size_t node_below(double p) const {
    const auto j = static_cast<std::size_t>(std::floor(p / dp));
    return std::min<std::size_t>(j, g.size() - 1);
  }
  double g_at(double p) const {
    const std::size_t j = node_below(p);
    const double pj = static_cast<double>(j) * dp;
    return g[j] + numerics::adaptive_simpson([this](double r) { return g_integrand(r); }, pj, p,
                                             1e-15);
  }
  double log_density(double p) const {
    const double p_max = q.x_max();
    return std::log(p / p_max) / a + g_at(p) - g.back();
  }
  double density(double p) const { return p <= 0.0 ? 0.0 : std::exp(log_density(p)); }
  double phi_at(double p) const {
    const std::size_t j = node_below(p);
    const double pj = static_cast<double>(j) * dp;
    return phi[j] + numerics::adaptive_simpson([this](double r) { return density(r); }, pj, p,
                                               1e-14);
  }
};

PressureLaw PressureLaw::power_law(double gamma, double p_max) {
  require_positive(gamma, "law.gamma");
  require_positive(p_max, "law.p_max");
  PressureLaw law;
  law.kind_ = Kind::PowerLaw;
  law.parameter_ = gamma;
  law.p_max_ = p_max;
  return law;
}

PressureLaw PressureLaw::dhv(double epsilon, double p_max) {
  require_positive(epsilon, "law.epsilon");
  require_positive(p_max, "law.p_max");
  PressureLaw law;
  law.kind_ = Kind::DHV;
  law.parameter_ = epsilon;
  law.p_max_ = p_max;
  return law;
}

PressureLaw PressureLaw::tabulated(std::vector<double> p, std::vector<double> q) {
  if (p.size() < 3 || p.size() != q.size()) {
    throw ConstructionError("tabulated law needs at least 3 matching (p, q) samples");
  }
  if (p.front() != 0.0) throw ConstructionError("tabulated law must start at p = 0");
  if (std::abs(q.front()) > 0.0) throw ConstructionError("tabulated law needs q(0) = 0");
  for (std::size_t i = 1; i < q.size(); ++i) {
    if (!(q[i] > 0.0)) throw ConstructionError("tabulated law needs q > 0 for p > 0");
  }
  auto table = std::make_shared<Table>();
  try {
    table->q = numerics::Pchip(std::move(p), std::move(q));
  } catch (const std::invalid_argument& e) {
    throw ConstructionError(std::string("tabulated law: ") + e.what());
  }
  const double p_max = table->q.x_max();
  table->a = table->q.derivative(0.0);
  if (!(table->a > 0.0)) throw ConstructionError("tabulated law needs q'(0) > 0");
  table->g0_slope = -table->q.second_derivative(0.0) / (2.0 * table->a * table->a);

  // Interpolant positivity between samples.
  for (int i = 1; i <= kTableIntervals; ++i) {
    const double r = p_max * i / kTableIntervals;
    if (!(table->q(r) > 0.0)) throw ConstructionError("tabulated q interpolant is not positive");
  }

  table->dp = p_max / kTableIntervals;
  table->g.assign(kTableIntervals + 1, 0.0);
  auto gi = [t = table.get()](double r) { return t->g_integrand(r); };
  for (int k = 1; k <= kTableIntervals; ++k) {
    table->g[k] = table->g[k - 1] +
                  numerics::adaptive_simpson(gi, (k - 1) * table->dp, k * table->dp, 1e-15);
  }
  table->phi.assign(kTableIntervals + 1, 0.0);
  auto ni = [t = table.get()](double r) { return t->density(r); };
  for (int k = 1; k <= kTableIntervals; ++k) {
    table->phi[k] = table->phi[k - 1] +
                    numerics::adaptive_simpson(ni, (k - 1) * table->dp, k * table->dp, 1e-14);
  }

  PressureLaw law;
  law.kind_ = Kind::Tabulated;
  law.parameter_ = 0.0;
  law.p_max_ = p_max;
  law.table_ = std::move(table);
  return law;
}

PressureLaw PressureLaw::with_p_max(double p_max) const {
  if (kind_ == Kind::Tabulated) {
    if (std::abs(p_max - p_max_) > 1e-12 * p_max_) {
      throw ConstructionError("tabulated law range is fixed by its samples");
    }
    return *this;
  }
  require_positive(p_max, "law.p_max");
  PressureLaw out = *this;
  out.p_max_ = p_max;
  return out;
}

std::string PressureLaw::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::PowerLaw: os << "power-law(gamma=" << parameter_ << ")"; break;
    case Kind::DHV: os << "dhv(epsilon=" << parameter_ << ")"; break;
    case Kind::Tabulated: os << "tabulated(" << table_->q.knots().size() << " samples)"; break;
  }
  return os.str();
}

double PressureLaw::density_limit() const {
  return kind_ == Kind::PowerLaw ? std::numeric_limits<double>::infinity() : 1.0;
}

void PressureLaw::check_table_range(double p) const {
  if (p < 0.0 || p > p_max_ * (1.0 + 1e-12)) {
    throw RangeError("pressure " + std::to_string(p) + " outside tabulated range [0, " +
                     std::to_string(p_max_) + "]");
  }
}

double PressureLaw::pressure(double n) const {
  if (n < 0.0 || std::isnan(n)) throw DomainError("density must be nonnegative");
  if (n == 0.0) return 0.0;
  switch (kind_) {
    case Kind::PowerLaw:
      return std::pow(n, parameter_);
    case Kind::DHV:
      if (n >= 1.0) throw DomainError("DHV pressure is singular at density >= 1");
      return parameter_ * n / (1.0 - n);
    case Kind::Tabulated: {
      if (n > 1.0 + 1e-12) throw RangeError("density above the tabulated range");
      if (n >= 1.0) return p_max_;
      // Safeguarded Newton on log n(p) = log n, d/dp log n = 1/q.
      const Table& t = *table_;
      const double target = std::log(n);
      double lo = 0.0, hi = p_max_;
      double p = std::clamp(p_max_ * std::pow(n, t.a), 1e-300, p_max_);
      for (int it = 0; it < 200; ++it) {
        const double f = t.log_density(p) - target;
        if (f > 0.0) hi = p; else lo = p;
        double next = p - f * t.q(p);
        if (!(next > lo && next < hi)) next = lo > 0.0 ? std::sqrt(lo * hi) : 0.5 * hi;
        if (std::abs(next - p) <= 1e-15 * p) return next;
        p = next;
      }
      return p;
    }
  }
  return 0.0;
}

double PressureLaw::density(double p) const {
  if (p < 0.0 || std::isnan(p)) throw DomainError("pressure must be nonnegative");
  if (p == 0.0) return 0.0;
  switch (kind_) {
    case Kind::PowerLaw: return std::pow(p, 1.0 / parameter_);
    case Kind::DHV: return p / (p + parameter_);
    case Kind::Tabulated:
      check_table_range(p);
      return table_->density(std::min(p, p_max_));
  }
  return 0.0;
}

double PressureLaw::q(double p) const {
  switch (kind_) {
    case Kind::PowerLaw: return parameter_ * p;
    case Kind::DHV: return p + p * p / parameter_;
    case Kind::Tabulated: check_table_range(p); return table_->q(p);
  }
  return 0.0;
}

double PressureLaw::q_prime(double p) const {
  switch (kind_) {
    case Kind::PowerLaw: return parameter_;
    case Kind::DHV: return 1.0 + 2.0 * p / parameter_;
    case Kind::Tabulated: check_table_range(p); return table_->q.derivative(p);
  }
  return 0.0;
}

double PressureLaw::q_second(double p) const {
  switch (kind_) {
    case Kind::PowerLaw: return 0.0;
    case Kind::DHV: return 2.0 / parameter_;
    case Kind::Tabulated: check_table_range(p); return table_->q.second_derivative(p);
  }
  return 0.0;
}

double PressureLaw::q_excess(double p) const {
  switch (kind_) {
    case Kind::PowerLaw: return 0.0;
    case Kind::DHV: return p * p / parameter_;
    case Kind::Tabulated: check_table_range(p); return table_->q.excess_over_start_tangent(p);
  }
  return 0.0;
}

double PressureLaw::flux_potential(double n) const {
  if (n < 0.0 || std::isnan(n)) throw DomainError("density must be nonnegative");
  if (n == 0.0) return 0.0;
  switch (kind_) {
    case Kind::PowerLaw: {
      const double g = parameter_;
      return g / (g + 1.0) * std::pow(n, g + 1.0);
    }
    case Kind::DHV:
      if (n >= 1.0) throw DomainError("DHV flux potential is singular at density >= 1");
      if (n < 0.05) {
        // n/(1-n) + log(1-n) = sum_{k>=2} (1 - 1/k) n^k, avoids cancellation
        double term = n, sum = 0.0;
        for (int k = 2; k <= 40; ++k) {
          term *= n;
          sum += (1.0 - 1.0 / k) * term;
        }
        return parameter_ * sum;
      }
      return parameter_ * (n / (1.0 - n) + std::log1p(-n));
    case Kind::Tabulated:
      return table_->phi_at(pressure(n));
  }
  return 0.0;
}

}  // namespace ablab
