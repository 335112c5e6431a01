#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "uqdc/density.hpp"
#include "uqdc/maps.hpp"

namespace uqdc {

/// Ordered i.i.d. draws, row-major in points.
struct SampleSet {
  std::vector<double> points;
  std::size_t dimension = 1;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::string source;

  [[nodiscard]] std::size_t size() const noexcept { return dimension == 0 ? 0 : points.size() / dimension; }
  [[nodiscard]] std::span<const double> point(std::size_t i) const {
    return std::span<const double>(points).subspan(i * dimension, dimension);
  }
  /// The first count draws; equal to drawing count samples directly.
  [[nodiscard]] SampleSet prefix(std::size_t count) const;
};

/// Draw i uses generator indices i*d .. i*d+d-1, so a smaller set is a
/// prefix of a larger one with the same seed and stream.
[[nodiscard]] SampleSet draw_initial(const AnalyticDensity& dist, std::size_t m, std::uint64_t seed,
                                     std::uint64_t stream);
[[nodiscard]] SampleSet draw_initial(const AnalyticDensity& dist, std::size_t m, std::uint64_t seed);

/// A map failed at one of the samples.
class MapEvaluationError : public std::runtime_error {
 public:
  MapEvaluationError(std::size_t index, const std::string& what)
      : std::runtime_error(what), index_(index) {}
  [[nodiscard]] std::size_t sample_index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Evaluates map at every sample in order.
[[nodiscard]] std::vector<double> evaluate_map(const QoiMap& map, const SampleSet& samples);

/// Push-forward of the shared samples through one map, with its KDE.
class PushforwardEnsemble {
 public:
  PushforwardEnsemble(std::string label, std::shared_ptr<const SampleSet> samples, QoiMap map,
                      std::vector<double> outputs, std::shared_ptr<const KdeDensity> kde);

  /// KDE at the map output: pi^{Q_n}(Q_n(lambda)).
  [[nodiscard]] double eval_composed(std::span<const double> lambda) const;
  [[nodiscard]] double eval_composed(double lambda) const;
  /// Composed density at every stored sample.
  [[nodiscard]] std::vector<double> composed_at_samples() const;

  [[nodiscard]] const std::string& label() const noexcept { return label_; }
  [[nodiscard]] const SampleSet& samples() const noexcept { return *samples_; }
  [[nodiscard]] std::shared_ptr<const SampleSet> shared_samples() const noexcept { return samples_; }
  [[nodiscard]] const QoiMap& map() const noexcept { return map_; }
  [[nodiscard]] std::span<const double> outputs() const noexcept { return outputs_; }
  [[nodiscard]] const KdeDensity& kde() const noexcept { return *kde_; }
  [[nodiscard]] std::shared_ptr<const KdeDensity> shared_kde() const noexcept { return kde_; }

  /// Columns sample_index, lambda..., q.
  [[nodiscard]] std::string to_csv() const;
  void write_csv(const std::filesystem::path& path) const;

 private:
  std::string label_;
  std::shared_ptr<const SampleSet> samples_;
  QoiMap map_;
  std::vector<double> outputs_;
  std::shared_ptr<const KdeDensity> kde_;
};

[[nodiscard]] PushforwardEnsemble build_pushforward(const QoiMap& map, std::shared_ptr<const SampleSet> samples,
                                                    std::string label = {},
                                                    BandwidthRule rule = BandwidthRule::scott);

}  // namespace uqdc
