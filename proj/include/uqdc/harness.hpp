#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "uqdc/diagnostics.hpp"
#include "uqdc/inverse.hpp"

namespace uqdc {

/// Invalid or unreadable experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure inside a named stage of an experiment.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  [[nodiscard]] const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

enum class ExperimentKind { ode, pde, singular };

[[nodiscard]] std::string to_string(ExperimentKind kind);
[[nodiscard]] ExperimentKind parse_experiment(const std::string& name);

struct NormSpec {
  std::string space;  // "data" (push-forward on D_c) or "param" (initial measure)
  double order = 2.0;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::ode;
  std::size_t m = 10000;
  std::vector<unsigned> orders;
  std::uint64_t seed = 0;
  double observed_mean = 1.0;
  double observed_std = 0.1;
  std::vector<NormSpec> norms;
  std::filesystem::path output_dir = "out";
  std::size_t replicates = 1;

  std::vector<std::size_t> table_sizes{1000, 10000, 100000};
  std::size_t norm_points = 10000;
  Interval region;  // D_c
  double dt = 1e-3;
  std::size_t quadrature_points = 20;
  ProbeSet lipschitz_probes = ProbeSet::centers;
  bool consistency = true;
  double consistency_gate = 0.95;
  std::size_t min_accepted = 5000;
  bool export_ensembles = false;

  /// The setup of each experiment; fields not given in a file keep these values.
  [[nodiscard]] static ExperimentConfig defaults(ExperimentKind kind);
  /// Throws ConfigError on unknown keys, wrong types or violated invariants.
  [[nodiscard]] static ExperimentConfig from_json(const nlohmann::json& doc);
  [[nodiscard]] nlohmann::json to_json() const;
  void validate() const;
};

[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path& path);

[[nodiscard]] AnalyticDensity initial_density(ExperimentKind kind);

struct ConsistencyResult {
  unsigned order = 0;
  double expected_ratio = 0.0;
  bool gated = false;  // expected ratio passed the gate and the check ran
  double ks = 0.0;
  std::size_t accepted = 0;
  std::size_t proposals = 0;
  double bound = 0.0;
  bool reached_target = false;  // min_accepted met within the proposal budget
};

/// Proposal budget of one consistency check.
inline constexpr std::size_t kMaxConsistencyProposals = 2'000'000;

/// Every stochastic cell of one seed.
struct ReplicateResult {
  std::uint64_t seed = 0;
  BoundTable bounds;
  BoundTable lipschitz;
  std::vector<double> expected_ratio;           // per order
  double expected_ratio_exact = 0.0;            // exact map through the same KDE pipeline
  std::vector<double> expected_ratio_exact_pf;  // singular: exact simple-function push-forward per order
  std::vector<ErrorCurve> pushforward_error;
  std::vector<ErrorCurve> composed_error;
  std::vector<ErrorCurve> updated_error;
  std::vector<PredictabilityVerdict> predictability;  // per order
  PredictabilityVerdict predictability_exact;
  std::vector<double> bandwidths;  // per order
  double bandwidth_exact = 0.0;
  double seconds = 0.0;  // wall clock; never written to the report
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<ReplicateResult> replicates;
  ReplicateResult mean;
  std::optional<ReplicateResult> stddev;  // when replicates > 1
  std::vector<ConsistencyResult> consistency;  // from the first replicate
  nlohmann::json surrogates;
  std::string profiles_csv;  // singular only
  double seconds = 0.0;

  [[nodiscard]] nlohmann::json to_json() const;
};

/// Surrogate map of order n for the experiment.
[[nodiscard]] std::vector<QoiMap> build_surrogates(const ExperimentConfig& config, nlohmann::json* record = nullptr);
[[nodiscard]] QoiMap exact_map(ExperimentKind kind);

[[nodiscard]] ExperimentReport run_experiment(const ExperimentConfig& config);

/// Writes the CSV tables and report.json (byte-stable), plus timing.json.
void emit_tables(const ExperimentReport& report, const std::filesystem::path& output_dir);

inline constexpr const char* kSoftwareVersion = "1.0.0";

}  // namespace uqdc
