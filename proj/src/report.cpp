#include "ablab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

namespace ablab {

void write_bound_report_csv(std::ostream& os, const BoundReport& r) {
  os << "t,measured,bound,margin\n";
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    os << format_double(r.times[i]) << ',' << format_double(r.measured[i]) << ','
       << format_double(r.bound[i]) << ',' << format_double(r.margin[i]) << '\n';
  }
}

std::string summary_text(const std::vector<TheoremOutcome>& outcomes) {
  std::ostringstream os;
  for (const auto& o : outcomes) {
    const auto& r = o.report;
    os << "[" << o.id << "] " << (r.passed ? "PASS" : "FAIL") << "\n";
    os << "  measured: " << o.measured_form << "\n";
    os << "  bound:    " << o.bound_form << "\n";
    for (const auto& [name, value] : o.constants) {
      os << "  " << name << " = " << format_double(value) << "\n";
    }
    os << "  samples = " << r.times.size() << "\n";
    os << "  worst_margin = " << format_double(r.worst_margin) << " at t = "
       << format_double(r.worst_time) << " (relative " << format_double(r.worst_relative)
       << ", tolerance " << format_double(r.tolerance) << ")\n";
  }
  return os.str();
}

void write_snapshot_csv(std::ostream& os, const Snapshot& s) {
  const Grid& g = s.n->grid;
  if (g.dim == 1) {
    os << "cell_index,x,n,p,w\n";
    for (int i = 0; i < g.cells; ++i) {
      os << i << ',' << format_double(g.center(i)) << ',' << format_double((*s.n)[i]) << ','
         << format_double((*s.p)[i]) << ',' << format_double((*s.w)[i]) << '\n';
    }
    return;
  }
  os << "cell_index,cell_index_y,x,y,n,p,w\n";
  for (int j = 0; j < g.cells; ++j) {
    for (int i = 0; i < g.cells; ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * g.cells + i;
      os << i << ',' << j << ',' << format_double(g.center(i)) << ','
         << format_double(g.center(j)) << ',' << format_double((*s.n)[k]) << ','
         << format_double((*s.p)[k]) << ',' << format_double((*s.w)[k]) << '\n';
    }
  }
}

std::string snapshot_filename(double time) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snapshot_t%012lld.csv", std::llround(time * 1e6));
  return buf;
}

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string svg_loglog(const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<PlotSeries>& series) {
  constexpr double W = 640, H = 420, L = 80, R = 20, T = 40, B = 60;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
      x0 = std::min(x0, std::log10(s.x[i]));
      x1 = std::max(x1, std::log10(s.x[i]));
      y0 = std::min(y0, std::log10(s.y[i]));
      y1 = std::max(y1, std::log10(s.y[i]));
    }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
  x0 = std::floor(x0), x1 = std::ceil(x1), y0 = std::floor(y0), y1 = std::ceil(y1);
  auto px = [&](double lx) { return L + (lx - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double ly) { return H - B - (ly - y0) / (y1 - y0) * (H - T - B); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
     << escape(title) << "</text>\n";
  for (int d = static_cast<int>(x0); d <= static_cast<int>(x1); ++d) {
    os << "<line x1=\"" << num(px(d)) << "\" y1=\"" << T << "\" x2=\"" << num(px(d))
       << "\" y2=\"" << H - B << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << num(px(d)) << "\" y=\"" << H - B + 16
       << "\" text-anchor=\"middle\">1e" << d << "</text>\n";
  }
  for (int d = static_cast<int>(y0); d <= static_cast<int>(y1); ++d) {
    os << "<line x1=\"" << L << "\" y1=\"" << num(py(d)) << "\" x2=\"" << W - R << "\" y2=\""
       << num(py(d)) << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << L - 6 << "\" y=\"" << num(py(d) + 4) << "\" text-anchor=\"end\">1e"
       << d << "</text>\n";
  }
  os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\""
     << H - T - B << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 20 << "\" text-anchor=\"middle\">"
     << escape(x_label) << "</text>\n";
  os << "<text x=\"18\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
     << (T + H - B) / 2 << ")\">" << escape(y_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* colour = kPalette[k % (sizeof kPalette / sizeof *kPalette)];
    os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\"";
    if (s.dashed) os << " stroke-dasharray=\"6 4\"";
    os << " points=\"";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
      os << num(px(std::log10(s.x[i]))) << ',' << num(py(std::log10(s.y[i]))) << ' ';
    }
    os << "\"/>\n";
    const double ly = T + 16 + 16 * static_cast<double>(k);
    os << "<line x1=\"" << W - R - 150 << "\" y1=\"" << ly - 4 << "\" x2=\"" << W - R - 126
       << "\" y2=\"" << ly - 4 << "\" stroke=\"" << colour << "\" stroke-width=\"1.5\""
       << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
    os << "<text x=\"" << W - R - 120 << "\" y=\"" << ly << "\">" << escape(s.name) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string svg_bound_plot(const TheoremOutcome& o) {
  const auto& r = o.report;
  const double sign = r.sense == BoundSense::LowerBoundsMinW ? -1.0 : 1.0;
  PlotSeries measured{"measured", r.times, {}, false};
  PlotSeries bound{"bound", r.times, {}, true};
  for (double v : r.measured) measured.y.push_back(sign * v);
  for (double v : r.bound) bound.y.push_back(sign * v);
  const std::string y = sign < 0 ? "-(" + o.measured_form + ")" : o.measured_form;
  return svg_loglog(o.id + ": " + o.bound_form, "t", y, {measured, bound});
}

}  // namespace ablab
