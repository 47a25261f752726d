#include "ablab/growth_law.hpp"

#include <cmath>
#include <sstream>

#include "ablab/errors.hpp"

namespace ablab {

GrowthLaw GrowthLaw::zero(double p_max) {
  if (!(p_max > 0.0)) throw DomainError("growth.p_max must be positive");
  GrowthLaw law;
  law.kind_ = Kind::Zero;
  law.p_max_ = p_max;
  return law;
}

GrowthLaw GrowthLaw::linear(double rate, double p_max) {
  if (!(rate > 0.0)) throw DomainError("growth.rate must be positive");
  if (!(p_max > 0.0)) throw DomainError("growth.p_max must be positive");
  GrowthLaw law;
  law.kind_ = Kind::Linear;
  law.rate_ = rate;
  law.p_max_ = p_max;
  return law;
}

GrowthLaw GrowthLaw::tabulated(std::vector<double> p, std::vector<double> g) {
  if (p.size() < 2 || p.size() != g.size()) {
    throw ConstructionError("tabulated growth needs at least 2 matching samples");
  }
  if (p.front() != 0.0) throw ConstructionError("tabulated growth must start at p = 0");
  if (g.back() != 0.0) throw ConstructionError("tabulated growth must vanish at p_M");
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (!(g[i] < g[i - 1])) throw ConstructionError("tabulated growth must be decreasing");
  }
  GrowthLaw law;
  law.kind_ = Kind::Tabulated;
  law.p_max_ = p.back();
  try {
    law.table_ = numerics::Pchip(std::move(p), std::move(g));
  } catch (const std::invalid_argument& e) {
    throw ConstructionError(std::string("tabulated growth: ") + e.what());
  }
  return law;
}

std::string GrowthLaw::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Zero: os << "zero"; break;
    case Kind::Linear: os << "linear(rate=" << rate_ << ", p_max=" << p_max_ << ")"; break;
    case Kind::Tabulated: os << "tabulated(p_max=" << p_max_ << ")"; break;
  }
  return os.str();
}

double GrowthLaw::clamp_checked(double p) const {
  if (p < 0.0 || p > p_max_ * (1.0 + 1e-9) || std::isnan(p)) {
    throw RangeError("growth law evaluated at p = " + std::to_string(p) + " outside [0, " +
                     std::to_string(p_max_) + "]");
  }
  return std::min(p, p_max_);
}

double GrowthLaw::g(double p) const {
  if (kind_ == Kind::Zero) return 0.0;
  p = clamp_checked(p);
  if (kind_ == Kind::Linear) return rate_ * (p_max_ - p);
  return table_(p);
}

double GrowthLaw::g_prime(double p) const {
  if (kind_ == Kind::Zero) return 0.0;
  p = clamp_checked(p);
  if (kind_ == Kind::Linear) return -rate_;
  return table_.derivative(p);
}

double GrowthLaw::g_extended(double p) const {
  switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::Linear: return rate_ * (p_max_ - p);
    case Kind::Tabulated:
      if (p <= p_max_) return table_(std::max(p, 0.0));
      return table_.derivative(p_max_) * (p - p_max_);
  }
  return 0.0;
}

}  // namespace ablab
