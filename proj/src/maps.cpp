#include "uqdc/maps.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace uqdc {
namespace {

constexpr double kRegionLo = 0.4;
constexpr double kRegionHi = 0.6;
constexpr double kSingularThreshold = 1e-8;

// Mean of sin(t x) over [a, b] for t = lambda * pi.
double mean_sine(double lambda) noexcept {
  const double t = lambda * std::numbers::pi;
  const double a = kRegionLo;
  const double b = kRegionHi;
  if (std::abs(lambda) < kSingularThreshold) {
    const double t2 = t * t;
    return t * ((a + b) / 2.0 - t2 * (b * b + a * a) * (a + b) / 24.0 +
                t2 * t2 * (std::pow(b, 6) - std::pow(a, 6)) / (720.0 * (b - a)));
  }
  // cos(ta) - cos(tb) = 2 sin(t(a+b)/2) sin(t(b-a)/2)
  return 2.0 * std::sin(t * (a + b) / 2.0) * std::sin(t * (b - a) / 2.0) / (t * (b - a));
}

// Mean of cos(t y) over [c, d] for t = lambda * pi.
double mean_cosine(double lambda) noexcept {
  const double t = lambda * std::numbers::pi;
  const double c = kRegionLo;
  const double d = kRegionHi;
  if (std::abs(lambda) < kSingularThreshold) {
    const double t2 = t * t;
    return 1.0 - t2 * (d * d + d * c + c * c) / 6.0 +
           t2 * t2 * (std::pow(d, 5) - std::pow(c, 5)) / (120.0 * (d - c));
  }
  // sin(td) - sin(tc) = 2 cos(t(c+d)/2) sin(t(d-c)/2)
  return 2.0 * std::cos(t * (c + d) / 2.0) * std::sin(t * (d - c) / 2.0) / (t * (d - c));
}

}  // namespace

QoiMap::QoiMap(std::string name, std::size_t dimension, Evaluator evaluator)
    : name_(std::move(name)),
      dimension_(dimension),
      evaluator_(std::make_shared<const Evaluator>(std::move(evaluator))) {
  if (dimension_ == 0) throw std::invalid_argument("QoiMap: dimension must be positive");
  if (!*evaluator_) throw std::invalid_argument("QoiMap: empty evaluator");
}

double QoiMap::operator()(std::span<const double> lambda) const {
  if (lambda.size() != dimension_) {
    std::ostringstream msg;
    msg << "map '" << name_ << "' expects dimension " << dimension_ << ", got " << lambda.size();
    throw std::invalid_argument(msg.str());
  }
  return (*evaluator_)(lambda);
}

double QoiMap::operator()(double lambda) const { return (*this)(std::span<const double>(&lambda, 1)); }

double ode_exact_map(double lambda) noexcept { return std::exp(-0.5 * lambda); }

double pde_exact_qoi(double lambda1, double lambda2) noexcept {
  return mean_sine(lambda1) * mean_cosine(lambda2);
}

double quintic_map(double lambda) noexcept {
  const double l2 = lambda * lambda;
  return l2 * l2 * lambda;
}

PiecewiseLinearMap::PiecewiseLinearMap(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
  if (knots_.size() < 2) throw std::invalid_argument("PiecewiseLinearMap: need at least two knots");
  if (knots_.size() != values_.size())
    throw std::invalid_argument("PiecewiseLinearMap: knots and values differ in length");
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (!(knots_[i] > knots_[i - 1]))
      throw std::invalid_argument("PiecewiseLinearMap: knots must be strictly increasing");
  }
}

PiecewiseLinearMap PiecewiseLinearMap::interpolate(const std::function<double(double)>& f,
                                                   std::vector<double> knots) {
  std::vector<double> values(knots.size());
  std::transform(knots.begin(), knots.end(), values.begin(), f);
  return PiecewiseLinearMap(std::move(knots), std::move(values));
}

double PiecewiseLinearMap::operator()(double lambda) const {
  if (!(lambda >= knots_.front() && lambda <= knots_.back())) {
    std::ostringstream msg;
    msg << "piecewise-linear map evaluated at " << lambda << " outside [" << knots_.front() << ", "
        << knots_.back() << "]";
    throw DomainError(msg.str());
  }
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), lambda);
  if (it == knots_.end()) return values_.back();
  const std::size_t i = static_cast<std::size_t>(it - knots_.begin()) - 1;
  if (lambda == knots_[i]) return values_[i];
  return values_[i] + (lambda - knots_[i]) * slope(i);
}

double PiecewiseLinearMap::slope(std::size_t segment) const {
  if (segment >= segments()) throw std::out_of_range("PiecewiseLinearMap::slope");
  return (values_[segment + 1] - values_[segment]) / (knots_[segment + 1] - knots_[segment]);
}

PiecewiseLinearMap pwl_surrogate(unsigned n) {
  if (n < 1) throw std::invalid_argument("pwl_surrogate: n must be at least 1");
  std::vector<double> knots(n + 2);
  for (unsigned k = 1; k <= n + 2; ++k) knots[k - 1] = -1.0 + 2.0 * (k - 1) / (n + 1);
  knots.back() = 1.0;
  return PiecewiseLinearMap::interpolate(quintic_map, std::move(knots));
}

namespace qoi {

QoiMap ode() {
  return QoiMap("ode_exact", 1, [](std::span<const double> x) { return ode_exact_map(x[0]); });
}

QoiMap pde() {
  return QoiMap("pde_exact", 2, [](std::span<const double> x) { return pde_exact_qoi(x[0], x[1]); });
}

QoiMap quintic() {
  return QoiMap("quintic_exact", 1, [](std::span<const double> x) { return quintic_map(x[0]); });
}

QoiMap from(PiecewiseLinearMap map, std::string name) {
  return QoiMap(std::move(name), 1,
                [m = std::move(map)](std::span<const double> x) { return m(x[0]); });
}

}  // namespace qoi
}  // namespace uqdc
