#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "uqdc/density.hpp"
#include "uqdc/forward.hpp"

namespace uqdc {

/// Where B and L are probed: the KDE centres (default) or a dense grid
/// spanning the centres +- 5 bandwidths.
enum class ProbeSet { centers, dense_grid };

[[nodiscard]] double density_bound(const KdeDensity& kde, std::span<const double> probes);
[[nodiscard]] double density_bound(const PushforwardEnsemble& pf, ProbeSet probes = ProbeSet::centers);

[[nodiscard]] double lipschitz_estimate(const KdeDensity& kde, std::span<const double> probes);
[[nodiscard]] double lipschitz_estimate(const PushforwardEnsemble& pf, ProbeSet probes = ProbeSet::centers);

/// Evenly spaced grid over the 1-D KDE support, count points.
[[nodiscard]] std::vector<double> dense_probe_grid(const KdeDensity& kde, std::size_t count = 20001);

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  [[nodiscard]] double length() const noexcept { return hi - lo; }
};

/// N uniform draws on the interval from the (seed, "data_norm") stream.
[[nodiscard]] std::vector<double> uniform_points(Interval region, std::size_t count, std::uint64_t seed);

/// (|region| * mean |f - g|^r)^(1/r) over uniform draws on the region.
[[nodiscard]] double lr_norm_data(const Density& f, const Density& g, double r, Interval region, std::size_t count,
                                  std::uint64_t seed);
[[nodiscard]] double lr_norm_data(const std::function<double(double)>& f, const std::function<double(double)>& g,
                                  double r, Interval region, std::size_t count, std::uint64_t seed);
/// Same estimator on values already evaluated at the uniform draws.
[[nodiscard]] double lr_norm_data(std::span<const double> f_values, std::span<const double> g_values, double r,
                                  double region_length);

using ParamFunction = std::function<double(std::span<const double>)>;

/// (mean over samples of |f - g|^p)^(1/p): the norm under the initial measure.
[[nodiscard]] double lp_norm_param(const ParamFunction& f, const ParamFunction& g, double p,
                                   const SampleSet& samples);
[[nodiscard]] double lp_norm_param(std::span<const double> f_values, std::span<const double> g_values, double p);

/// One-sample Kolmogorov-Smirnov statistic sup |F_n - F|.
[[nodiscard]] double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf);

/// B or L entries: rows are sample sizes m, columns are orders n.
struct BoundTable {
  std::string quantity;
  std::vector<std::size_t> sizes;
  std::vector<unsigned> orders;
  std::vector<double> values;  // sizes.size() x orders.size(), row-major

  [[nodiscard]] double at(std::size_t size_index, std::size_t order_index) const {
    return values.at(size_index * orders.size() + order_index);
  }
  double& at(std::size_t size_index, std::size_t order_index) {
    return values.at(size_index * orders.size() + order_index);
  }
  /// Header "m\n,<orders>", one row per m.
  [[nodiscard]] std::string to_csv() const;
  [[nodiscard]] nlohmann::json to_json() const;
};

/// A norm estimate per order.
struct ErrorCurve {
  std::string name;
  std::string space;  // "data" or "param"
  double norm_order = 2.0;
  std::string region;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<unsigned> orders;
  std::vector<double> values;

  [[nodiscard]] nlohmann::json to_json() const;
};

/// Curves sharing the same orders as one table: header "r\n,<orders>", one row per norm order.
[[nodiscard]] std::string curves_to_csv(std::span<const ErrorCurve> curves);

}  // namespace uqdc
