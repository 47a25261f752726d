#ifndef ABLAB_ERRORS_HPP
#define ABLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ablab {

/// Argument outside the mathematical domain of an operation (e.g. DHV density >= 1, t <= 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Query outside the sampled range of a tabulated law.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A weight or law could not be constructed from the given data.
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A structural hypothesis of an estimate does not hold for the given law/growth.
class HypothesisViolation : public std::runtime_error {
 public:
  HypothesisViolation(std::string theorem, const std::string& what)
      : std::runtime_error(theorem + ": " + what), theorem_(std::move(theorem)) {}
  const std::string& theorem() const noexcept { return theorem_; }

 private:
  std::string theorem_;
};

/// Explicit step exceeded the stability limit; carries the admissible step.
class StepRejected : public std::runtime_error {
 public:
  StepRejected(const std::string& what, double admissible_dt)
      : std::runtime_error(what), admissible_dt_(admissible_dt) {}
  double admissible_dt() const noexcept { return admissible_dt_; }

 private:
  double admissible_dt_;
};

class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scenario configuration error, located by key path and source line (0 when
/// unknown). Formats as "line 3: law.gamma must be positive".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, int line, const std::string& message)
      : std::runtime_error(format(key, line, message)), key_(std::move(key)), line_(line) {}
  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& key, int line, const std::string& message) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (!key.empty()) out += key + " ";
    return out + message;
  }
  std::string key_;
  int line_;
};

}  // namespace ablab

#endif  // ABLAB_ERRORS_HPP
