#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "uqdc/maps.hpp"

namespace uqdc {

namespace detail {
class GaussSum1d;
}

/// Degenerate or malformed input to a density constructor.
class ConstructionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The input is well formed but outside what an operation supports.
class UnsupportedInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An evaluable probability density on R^d. Implementations are immutable
/// after construction and safe to evaluate concurrently.
class Density {
 public:
  virtual ~Density() = default;

  [[nodiscard]] virtual std::size_t dimension() const noexcept = 0;
  [[nodiscard]] virtual double eval(std::span<const double> x) const = 0;
  [[nodiscard]] virtual std::string describe() const = 0;

  [[nodiscard]] double eval(double x) const { return eval(std::span<const double>(&x, 1)); }

  /// Evaluates at xs.size() / dimension() row-major points.
  virtual void eval_many(std::span<const double> xs, std::span<double> out) const;
  [[nodiscard]] std::vector<double> eval_many(std::span<const double> xs) const;

 protected:
  void check_dimension(std::span<const double> x) const;
};

/// Closed-form families: normal (1-D or product 2-D), uniform, and the
/// push-forward of uniform(-1, 1) through lambda^5.
class AnalyticDensity final : public Density {
 public:
  enum class Family { normal, uniform, quintic_pushforward };

  [[nodiscard]] static AnalyticDensity normal(double mean, double std);
  [[nodiscard]] static AnalyticDensity normal(std::vector<double> means, std::vector<double> stds);
  [[nodiscard]] static AnalyticDensity uniform(double lo, double hi);
  /// (1/10)|q|^(-4/5) on [-1, 1]; zero outside, a domain error at q = 0.
  [[nodiscard]] static AnalyticDensity quintic_pushforward();

  [[nodiscard]] std::size_t dimension() const noexcept override { return first_.size(); }
  [[nodiscard]] double eval(std::span<const double> x) const override;
  using Density::eval;
  [[nodiscard]] std::string describe() const override;

  /// Marginal CDF of a 1-D density.
  [[nodiscard]] double cdf(double x) const;

  [[nodiscard]] Family family() const noexcept { return family_; }
  /// Mean (normal) or lower bound (uniform) per coordinate.
  [[nodiscard]] std::span<const double> first() const noexcept { return first_; }
  /// Standard deviation (normal) or upper bound (uniform) per coordinate.
  [[nodiscard]] std::span<const double> second() const noexcept { return second_; }

 private:
  AnalyticDensity(Family family, std::vector<double> first, std::vector<double> second);

  Family family_;
  std::vector<double> first_;
  std::vector<double> second_;
};

enum class BandwidthRule { scott, fixed };

[[nodiscard]] std::string to_string(BandwidthRule rule);

/// Gaussian-kernel density estimate with a diagonal bandwidth.
class KdeDensity final : public Density {
 public:
  /// Explicit bandwidth; at least one centre.
  KdeDensity(std::vector<double> centers, std::size_t dimension, std::vector<double> bandwidth);

  /// Scott's rule: h_k = sd_k * m^(-1/(d+4)) with the unbiased sample sd.
  [[nodiscard]] static KdeDensity fit(std::span<const double> points, std::size_t dimension = 1,
                                      BandwidthRule rule = BandwidthRule::scott);

  [[nodiscard]] std::size_t dimension() const noexcept override { return dimension_; }
  [[nodiscard]] double eval(std::span<const double> x) const override;
  using Density::eval;
  [[nodiscard]] std::string describe() const override;

  /// Analytic gradient of the mixture.
  [[nodiscard]] std::vector<double> gradient(std::span<const double> x) const;
  [[nodiscard]] double derivative(double x) const;

  /// Density and gradient at many points; grad has xs.size() entries.
  void eval_with_gradient_many(std::span<const double> xs, std::span<double> dens,
                               std::span<double> grad) const;

  [[nodiscard]] std::size_t size() const noexcept { return centers_.size() / dimension_; }
  [[nodiscard]] std::span<const double> centers() const noexcept { return centers_; }
  [[nodiscard]] std::span<const double> bandwidth() const noexcept { return bandwidth_; }
  [[nodiscard]] BandwidthRule rule() const noexcept { return rule_; }

 private:
  void value_and_gradient(std::span<const double> x, double& value, std::span<double> grad) const;

  std::vector<double> centers_;
  std::size_t dimension_;
  std::vector<double> bandwidth_;
  BandwidthRule rule_ = BandwidthRule::fixed;
  std::shared_ptr<const detail::GaussSum1d> fast_;  // 1-D only
};

[[nodiscard]] KdeDensity kde_fit(std::span<const double> points, std::size_t dimension = 1,
                                 BandwidthRule rule = BandwidthRule::scott);

/// Piecewise-constant density: values[i] on [breakpoints[i], breakpoints[i+1]),
/// the last interval closed, zero elsewhere.
class SimpleFunctionDensity final : public Density {
 public:
  SimpleFunctionDensity(std::vector<double> breakpoints, std::vector<double> values);

  [[nodiscard]] std::size_t dimension() const noexcept override { return 1; }
  [[nodiscard]] double eval(std::span<const double> x) const override;
  using Density::eval;
  [[nodiscard]] std::string describe() const override;

  [[nodiscard]] double integral() const noexcept;
  [[nodiscard]] std::span<const double> breakpoints() const noexcept { return breakpoints_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

/// Exact push-forward of uniform(knots.front(), knots.back()) through a
/// strictly monotone piecewise-linear map.
[[nodiscard]] SimpleFunctionDensity pwl_pushforward_exact(const PiecewiseLinearMap& map);

}  // namespace uqdc
