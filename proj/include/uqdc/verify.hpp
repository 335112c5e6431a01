#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uqdc/harness.hpp"

namespace uqdc {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;

  /// "PASS criterion <id>: <title> | <detail>" (or FAIL).
  [[nodiscard]] std::string line() const;
};

/// Runs the acceptance criteria that the library can check by itself
/// (1 to 11). Experiment runs are cached so criteria sharing a run pay once.
class AcceptanceSuite {
 public:
  struct Options {
    std::size_t replicates = 10;
    std::uint64_t seed = 0;
    std::size_t m = 10000;
  };

  AcceptanceSuite();
  explicit AcceptanceSuite(Options options);

  [[nodiscard]] CriterionResult run(int id);

  /// Criteria exercised by `uqdc verify --experiment <name>`.
  [[nodiscard]] static std::vector<int> criteria_for(ExperimentKind kind);
  [[nodiscard]] static constexpr int library_criteria() { return 11; }

 private:
  const ExperimentReport& report(const std::string& key);
  double single_run_seconds(ExperimentKind kind);

  Options options_;
  std::map<std::string, ExperimentReport> reports_;
  std::map<ExperimentKind, double> timings_;
};

}  // namespace uqdc
