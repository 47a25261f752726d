#include "ablab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "ablab/errors.hpp"
#include "ablab/numerics.hpp"

namespace ablab {

Field w_field(const Field& p, const GrowthLaw& growth, kernels::Backend backend) {
  Field w(p.grid, Quantity::W);
  kernels::laplacian(p.grid, p.values, w.values, backend);
  if (!growth.is_zero()) {
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += growth.g_extended(p[i]);
  }
  return w;
}

Field neg_part(const Field& f) {
  Field out(f.grid, f.quantity);
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = std::max(0.0, -f[i]);
  return out;
}

namespace {

// Erodes `keep` along one axis: a cell survives only if no cell within
// `margin` steps along the axis is excluded.
void erode_axis(Mask& keep, const Grid& g, bool along_x, int margin) {
  const int c = g.cells;
  const int lines = g.dim == 2 ? c : 1;
  if (!along_x && g.dim == 1) return;
  const Mask src = keep;
  auto idx = [&](int line, int k) {
    return along_x ? static_cast<std::size_t>(line) * c + k : static_cast<std::size_t>(k) * c + line;
  };
  for (int line = 0; line < lines; ++line) {
    for (int k = 0; k < c; ++k) {
      if (!src[idx(line, k)]) continue;
      for (int d = -margin; d <= margin; ++d) {
        int j = k + d;
        if (j < 0 || j >= c) {
          if (g.boundary != Boundary::Periodic) continue;
          j = (j + c) % c;
        }
        if (!src[idx(line, j)]) {
          keep[idx(line, k)] = 0;
          break;
        }
      }
    }
  }
}

}  // namespace

Mask positivity_mask(const Field& n, double threshold, int margin) {
  double nmax = 0.0;
  for (double v : n.values) nmax = std::max(nmax, v);
  Mask m(n.size(), 0);
  if (!(nmax > 0.0)) return m;
  const double cut = threshold * nmax;
  for (std::size_t i = 0; i < n.size(); ++i) m[i] = n[i] > cut ? 1 : 0;
  if (margin > 0) {
    erode_axis(m, n.grid, true, margin);
    erode_axis(m, n.grid, false, margin);
  }
  return m;
}

Mask full_mask(const Grid& grid) { return Mask(grid.size(), 1); }

std::size_t mask_count(const Mask& m) {
  return static_cast<std::size_t>(std::count(m.begin(), m.end(), std::uint8_t{1}));
}

WeightedFunctionals weighted_functionals(const Field& p, const Field& w, const Weight& weight,
                                         const Mask& mask) {
  WeightedFunctionals out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!mask[i]) continue;
    const double neg = std::max(0.0, -w[i]);
    if (neg == 0.0) continue;
    const double h = weight.h(p[i]);
    out.l1 += h * neg;
    out.l2 += h * neg * neg;
    out.sup = std::max(out.sup, h * neg);
  }
  const double vol = w.grid.cell_volume();
  out.l1 *= vol;
  out.l2 *= vol;
  return out;
}

WeightedFunctionals weighted_functionals(const Field& p, const Field& w, const Weight& weight,
                                         const Field& n, double mask_threshold,
                                         int mask_margin) {
  return weighted_functionals(p, w, weight, positivity_mask(n, mask_threshold, mask_margin));
}

double masked_min(const Field& p, const Field& w, const Mask& mask,
                  const std::function<double(double)>& factor) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!mask[i]) continue;
    const double v = factor ? factor(p[i]) * w[i] : w[i];
    m = std::min(m, v);
  }
  return std::isfinite(m) ? m : 0.0;
}

DecayFit fit_decay(std::span<const double> t, std::span<const double> y, DecayModel model) {
  const double k = model == DecayModel::CoverT ? 1.0 : 2.0;
  std::vector<double> lt, ly;
  for (std::size_t i = 0; i < t.size() && i < y.size(); ++i) {
    if (t[i] > 0.0 && y[i] > 0.0) {
      lt.push_back(std::log(t[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  if (lt.size() < 5) {
    throw InsufficientData("fit_decay needs at least 5 positive samples, got " +
                           std::to_string(lt.size()));
  }
  double lc = 0.0;
  for (std::size_t i = 0; i < lt.size(); ++i) lc += ly[i] + k * lt[i];
  lc /= static_cast<double>(lt.size());
  std::vector<double> pred(lt.size());
  for (std::size_t i = 0; i < lt.size(); ++i) pred[i] = lc - k * lt[i];
  DecayFit fit;
  fit.C = std::exp(lc);
  fit.r_squared = numerics::r_squared(ly, pred);
  fit.samples = static_cast<int>(lt.size());
  return fit;
}

BoundReport bound_check(std::string theorem_id, std::span<const double> t,
                        std::span<const double> measured,
                        const std::function<double(double)>& bound_fn, BoundSense sense,
                        double tolerance) {
  BoundReport r;
  r.theorem_id = std::move(theorem_id);
  r.sense = sense;
  r.tolerance = tolerance;
  r.worst_margin = std::numeric_limits<double>::infinity();
  r.worst_relative = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double b = bound_fn(t[i]);
    const double m = sense == BoundSense::UpperBoundsSeries ? b - measured[i] : measured[i] - b;
    r.times.push_back(t[i]);
    r.measured.push_back(measured[i]);
    r.bound.push_back(b);
    r.margin.push_back(m);
    const double rel = std::abs(b) > 0.0 ? m / std::abs(b) : (m >= 0.0 ? 0.0 : -1.0);
    if (m < r.worst_margin) {
      r.worst_margin = m;
      r.worst_time = t[i];
    }
    r.worst_relative = std::min(r.worst_relative, rel);
    if (m < -tolerance * std::abs(b)) r.passed = false;
  }
  if (r.times.empty()) {
    r.worst_margin = 0.0;
    r.worst_relative = 0.0;
  }
  return r;
}

Complementarity complementarity_residual(const Field& p, const Field& w, const Field& n) {
  Complementarity c;
  for (std::size_t i = 0; i < p.size(); ++i) {
    c.r1 += std::abs(p[i] * w[i]);
    c.r2 += std::abs(p[i] * (n[i] - 1.0));
  }
  const double vol = p.grid.cell_volume();
  c.r1 *= vol;
  c.r2 *= vol;
  return c;
}

BlowupFit blowup_fit(std::span<const double> t, std::span<const double> y,
                     double trigger_factor, double saturation_fraction) {
  BlowupFit fit;
  if (t.empty() || !(y[0] > 0.0)) return fit;
  std::size_t start = t.size();
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (y[i] >= trigger_factor * y[0]) {
      start = i;
      break;
    }
  }
  if (start == t.size()) return fit;
  fit.triggered = true;
  fit.trigger_time = t[start];
  const double peak = *std::max_element(y.begin(), y.end());
  std::vector<double> tt, ly;
  for (std::size_t i = start; i < y.size() && i < t.size(); ++i) {
    if (saturation_fraction < 1.0 && y[i] > saturation_fraction * peak) break;
    tt.push_back(t[i]);
    ly.push_back(std::log(y[i]));
  }
  fit.window = static_cast<int>(tt.size());
  if (tt.size() < 3) throw InsufficientData("blow-up window has fewer than 3 samples");

  const double t_last = tt.back();
  const double span = std::max(t_last - tt.front(), 1e-300);
  // For fixed T the optimal log C is the mean of log y + log(T - t).
  auto log_c = [&](double T) {
    double s = 0.0;
    for (std::size_t i = 0; i < tt.size(); ++i) s += ly[i] + std::log(T - tt[i]);
    return s / static_cast<double>(tt.size());
  };
  auto sse = [&](double s) {
    const double T = t_last + std::exp(s);
    const double lc = log_c(T);
    double e = 0.0;
    for (std::size_t i = 0; i < tt.size(); ++i) {
      const double r = ly[i] - lc + std::log(T - tt[i]);
      e += r * r;
    }
    return e;
  };
  const double s_lo = std::log(span * 1e-9), s_hi = std::log(span * 1e3);
  const auto coarse = numerics::scan_extremum(sse, s_lo, s_hi, numerics::Extremum::Min, 400, 1e-12);
  const double s_best = coarse.argument;
  fit.T = t_last + std::exp(s_best);
  const double lc = log_c(fit.T);
  fit.C = std::exp(lc);
  std::vector<double> pred(tt.size());
  for (std::size_t i = 0; i < tt.size(); ++i) pred[i] = lc - std::log(fit.T - tt[i]);
  fit.r_squared = numerics::r_squared(ly, pred);
  return fit;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void DiagnosticsSeries::write_csv(std::ostream& os) const {
  os << "time,mass,min_w,sup_weighted_neg_w,l1_weighted_neg_w,l2_weighted_neg_w_sq,"
        "complementarity_r1,complementarity_r2,max_pxx\n";
  for (std::size_t i = 0; i < times.size(); ++i) {
    os << format_double(times[i]) << ',' << format_double(mass[i]) << ','
       << format_double(min_w[i]) << ',' << format_double(sup_weighted_neg_w[i]) << ','
       << format_double(l1_weighted_neg_w[i]) << ',' << format_double(l2_weighted_neg_w_sq[i])
       << ',' << format_double(complementarity_r1[i]) << ','
       << format_double(complementarity_r2[i]) << ',' << format_double(max_pxx[i]) << '\n';
  }
}

}  // namespace ablab
