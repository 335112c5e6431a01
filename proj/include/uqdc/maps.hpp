#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace uqdc {

/// Raised when a point lies outside the declared domain of a map or density.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Parameter-to-QoI map: a deterministic scalar function of a 1-D or 2-D point.
/// Cheap to copy; the evaluator is shared.
class QoiMap {
 public:
  using Evaluator = std::function<double(std::span<const double>)>;

  QoiMap(std::string name, std::size_t dimension, Evaluator evaluator);

  [[nodiscard]] double operator()(std::span<const double> lambda) const;
  [[nodiscard]] double operator()(double lambda) const;

  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] std::size_t dimension() const noexcept { return dimension_; }

 private:
  std::string name_;
  std::size_t dimension_;
  std::shared_ptr<const Evaluator> evaluator_;
};

/// y(0.5) for dy/dt = -lambda y, y(0) = 1.
[[nodiscard]] double ode_exact_map(double lambda) noexcept;

/// Average of sin(l1 pi x) cos(l2 pi y) over [0.4, 0.6]^2.
[[nodiscard]] double pde_exact_qoi(double lambda1, double lambda2) noexcept;

[[nodiscard]] double quintic_map(double lambda) noexcept;

/// Continuous piecewise-linear interpolant on sorted knots.
class PiecewiseLinearMap {
 public:
  PiecewiseLinearMap(std::vector<double> knots, std::vector<double> values);

  /// Interpolates f at the given knots.
  [[nodiscard]] static PiecewiseLinearMap interpolate(const std::function<double(double)>& f,
                                                      std::vector<double> knots);

  /// Throws DomainError outside [knots.front(), knots.back()].
  [[nodiscard]] double operator()(double lambda) const;

  [[nodiscard]] std::span<const double> knots() const noexcept { return knots_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::size_t segments() const noexcept { return knots_.size() - 1; }
  [[nodiscard]] double slope(std::size_t segment) const;

 private:
  std::vector<double> knots_;
  std::vector<double> values_;
};

/// Interpolant of lambda^5 on n + 2 equispaced knots over [-1, 1].
[[nodiscard]] PiecewiseLinearMap pwl_surrogate(unsigned n);

namespace qoi {

[[nodiscard]] QoiMap ode();
[[nodiscard]] QoiMap pde();
[[nodiscard]] QoiMap quintic();
[[nodiscard]] QoiMap from(PiecewiseLinearMap map, std::string name);

}  // namespace qoi

}  // namespace uqdc
