#ifndef ABLAB_REPORT_HPP
#define ABLAB_REPORT_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "ablab/analysis.hpp"
#include "ablab/solver.hpp"
#include "ablab/theorems.hpp"

namespace ablab {

/// One row per checked time: t, measured, bound, margin.
void write_bound_report_csv(std::ostream& os, const BoundReport& report);

/// Summary block: id, constants, worst margin and verdict for each estimate.
std::string summary_text(const std::vector<TheoremOutcome>& outcomes);

/// Columns cell_index[, cell_index_y], x[, y], n, p, w.
void write_snapshot_csv(std::ostream& os, const Snapshot& snapshot);
/// "snapshot_t" followed by the time in whole microseconds, zero padded.
std::string snapshot_filename(double time);

struct PlotSeries {
  std::string name;
  std::vector<double> x, y;
  bool dashed = false;
};

/// Log-log line plot; samples with x <= 0 or y <= 0 are dropped.
std::string svg_loglog(const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<PlotSeries>& series);

/// Measured functional against its bound. Lower bounds are plotted by
/// magnitude so both curves are positive.
std::string svg_bound_plot(const TheoremOutcome& outcome);

}  // namespace ablab

#endif  // ABLAB_REPORT_HPP
