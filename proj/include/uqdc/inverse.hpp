#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "uqdc/density.hpp"
#include "uqdc/forward.hpp"
#include "uqdc/maps.hpp"

namespace uqdc {

/// Push-forward values below this make the ratio undefined.
inline constexpr double kRatioFloor = 1e-12;

/// Rejection sampling found no proposal with a defined ratio.
class EmptyResultError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// pi_u(lambda) = initial(lambda) * observed(Q(lambda)) / pushforward(Q(lambda)).
class UpdatedDensity {
 public:
  UpdatedDensity(std::shared_ptr<const Density> initial, std::shared_ptr<const Density> observed,
                 std::shared_ptr<const Density> pushforward, QoiMap map);

  /// observed(q) / pushforward(q), or nullopt when the denominator is under the floor.
  [[nodiscard]] std::optional<double> ratio_at_output(double q) const;
  [[nodiscard]] std::optional<double> ratio(std::span<const double> lambda) const;
  [[nodiscard]] std::optional<double> ratio(double lambda) const;

  /// initial(lambda) * ratio(lambda); zero wherever the initial density is zero.
  [[nodiscard]] std::optional<double> updated(std::span<const double> lambda) const;
  [[nodiscard]] std::optional<double> updated(double lambda) const;

  /// Ratios at each sample; NaN marks an undefined ratio.
  [[nodiscard]] std::vector<double> ratios(const SampleSet& samples) const;
  /// Ratios from precomputed map outputs.
  [[nodiscard]] std::vector<double> ratios_from_outputs(std::span<const double> outputs) const;

  [[nodiscard]] const Density& initial() const noexcept { return *initial_; }
  [[nodiscard]] const Density& observed() const noexcept { return *observed_; }
  [[nodiscard]] const Density& pushforward() const noexcept { return *pushforward_; }
  [[nodiscard]] const QoiMap& map() const noexcept { return map_; }

 private:
  std::shared_ptr<const Density> initial_;
  std::shared_ptr<const Density> observed_;
  std::shared_ptr<const Density> pushforward_;
  QoiMap map_;
};

struct RejectionResult {
  std::vector<double> accepted;                 // row-major accepted points
  std::vector<std::size_t> accepted_indices;    // proposal indices, ascending
  std::size_t dimension = 1;
  std::size_t proposal_count = 0;
  double bound = 0.0;                           // M

  [[nodiscard]] std::size_t accepted_count() const noexcept { return accepted_indices.size(); }
  [[nodiscard]] double acceptance_rate() const noexcept {
    return proposal_count == 0 ? 0.0 : static_cast<double>(accepted_count()) / static_cast<double>(proposal_count);
  }
  [[nodiscard]] std::string to_csv() const;
  void write_csv(const std::filesystem::path& path) const;
};

/// Accepts proposal i iff uniform_i < r_i / M with M the largest defined ratio.
/// Uniform i is draw i of the (seed, stream) generator.
[[nodiscard]] RejectionResult rejection_sample(const UpdatedDensity& u, const SampleSet& proposals,
                                               std::uint64_t seed, std::uint64_t stream);
[[nodiscard]] RejectionResult rejection_sample(const UpdatedDensity& u, const SampleSet& proposals,
                                               std::uint64_t seed);
/// Same rule on precomputed ratios (NaN = undefined).
[[nodiscard]] RejectionResult rejection_sample_ratios(std::span<const double> ratios, const SampleSet& proposals,
                                                      std::uint64_t seed, std::uint64_t stream);

/// Mean ratio over the proposals, undefined ratios counting as zero.
[[nodiscard]] double expected_ratio(const UpdatedDensity& u, const SampleSet& proposals);
[[nodiscard]] double expected_ratio(std::span<const double> ratios);

struct PredictabilityVerdict {
  double constant = 0.0;             // C
  double violation_fraction = 0.0;
};

/// C = max observed / max(pushforward, floor); a violation is a probe where the
/// push-forward is under the floor while observed exceeds 1e-8.
[[nodiscard]] PredictabilityVerdict predictability_check(const Density& observed, const Density& pushforward,
                                                         std::span<const double> probes);

/// count evenly spaced probes over mean +- 4 std.
[[nodiscard]] std::vector<double> predictability_probes(double mean, double std, std::size_t count = 1001);

}  // namespace uqdc
