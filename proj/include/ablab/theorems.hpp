#ifndef ABLAB_THEOREMS_HPP
#define ABLAB_THEOREMS_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ablab/analysis.hpp"
#include "ablab/config.hpp"
#include "ablab/solver.hpp"
#include "ablab/weights.hpp"

namespace ablab {

/// The checkable estimates, by id.
const std::vector<std::string>& theorem_ids();
bool is_theorem_id(const std::string& id);

struct TheoremOutcome {
  std::string id;
  std::string bound_form;                                // e.g. "A/t"
  std::string measured_form;                             // e.g. "sum h |w|_-"
  std::vector<std::pair<std::string, double>> constants;  // in report order
  BoundReport report;
};

/// Collects the functionals each requested estimate needs at every snapshot
/// and turns them into bound reports at the end of the run.
///
/// Constants that depend only on the law and growth are computed up front, so
/// a violated structural hypothesis throws HypothesisViolation before any
/// time stepping. Constants that depend on the trajectory (A, the support
/// measure, the initial L2 functional) are taken over all observed snapshots.
class TheoremMonitor {
 public:
  TheoremMonitor(const ScenarioConfig& config, const PressureLaw& law, const GrowthLaw& growth);
  ~TheoremMonitor();
  TheoremMonitor(TheoremMonitor&&) noexcept;
  TheoremMonitor& operator=(TheoremMonitor&&) noexcept;

  void observe(const Snapshot& snapshot);
  std::vector<TheoremOutcome> finish() const;

 private:
  struct Check;
  ScenarioConfig config_;
  PressureLaw law_;
  GrowthLaw growth_;
  int N_;
  std::vector<Check> checks_;
  std::optional<Weight> l1_weight_;
  std::vector<double> times_;
  double sup_A_ = 0.0;
  double sup_support_ = 0.0;
};

bool all_passed(const std::vector<TheoremOutcome>& outcomes);

}  // namespace ablab

#endif  // ABLAB_THEOREMS_HPP
