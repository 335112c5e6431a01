#include "uqdc/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "uqdc/gauss_sum.hpp"
#include "uqdc/numeric.hpp"
#include "uqdc/parallel.hpp"

namespace uqdc {
namespace {

constexpr double kSingularFloor = 1e-300;

bool all_finite(std::span<const double> xs) {
  return std::all_of(xs.begin(), xs.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace

// ---------------------------------------------------------------- Density

void Density::check_dimension(std::span<const double> x) const {
  if (x.size() != dimension()) {
    std::ostringstream msg;
    msg << describe() << ": point of dimension " << x.size() << ", expected " << dimension();
    throw DomainError(msg.str());
  }
  for (double v : x) {
    if (std::isnan(v)) throw DomainError(describe() + ": NaN coordinate");
  }
}

void Density::eval_many(std::span<const double> xs, std::span<double> out) const {
  const std::size_t d = dimension();
  if (xs.size() != out.size() * d)
    throw std::invalid_argument("Density::eval_many: output size does not match point count");
  parallel_for(out.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = eval(xs.subspan(i * d, d));
  });
}

std::vector<double> Density::eval_many(std::span<const double> xs) const {
  std::vector<double> out(xs.size() / dimension());
  eval_many(xs, out);
  return out;
}

// -------------------------------------------------------- AnalyticDensity

AnalyticDensity::AnalyticDensity(Family family, std::vector<double> first, std::vector<double> second)
    : family_(family), first_(std::move(first)), second_(std::move(second)) {}

AnalyticDensity AnalyticDensity::normal(double mean, double std) {
  return normal(std::vector<double>{mean}, std::vector<double>{std});
}

AnalyticDensity AnalyticDensity::normal(std::vector<double> means, std::vector<double> stds) {
  if (means.empty() || means.size() > 2 || means.size() != stds.size())
    throw ConstructionError("normal density: need one or two coordinates");
  for (std::size_t k = 0; k < means.size(); ++k) {
    if (!std::isfinite(means[k]) || !(stds[k] > 0.0) || !std::isfinite(stds[k]))
      throw ConstructionError("normal density: mean must be finite and std positive");
  }
  return AnalyticDensity(Family::normal, std::move(means), std::move(stds));
}

AnalyticDensity AnalyticDensity::uniform(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo))
    throw ConstructionError("uniform density: need finite lo < hi");
  return AnalyticDensity(Family::uniform, {lo}, {hi});
}

AnalyticDensity AnalyticDensity::quintic_pushforward() {
  return AnalyticDensity(Family::quintic_pushforward, {-1.0}, {1.0});
}

double AnalyticDensity::eval(std::span<const double> x) const {
  check_dimension(x);
  switch (family_) {
    case Family::normal: {
      double p = 1.0;
      for (std::size_t k = 0; k < x.size(); ++k) p *= normal_pdf(x[k], first_[k], second_[k]);
      return p;
    }
    case Family::uniform:
      return (x[0] >= first_[0] && x[0] <= second_[0]) ? 1.0 / (second_[0] - first_[0]) : 0.0;
    case Family::quintic_pushforward: {
      const double a = std::abs(x[0]);
      if (a < kSingularFloor) {
        std::ostringstream msg;
        msg << "quintic push-forward density is singular at q = " << x[0];
        throw DomainError(msg.str());
      }
      return a > 1.0 ? 0.0 : 0.1 * std::pow(a, -0.8);
    }
  }
  return 0.0;
}

double AnalyticDensity::cdf(double x) const {
  if (dimension() != 1) throw std::invalid_argument("AnalyticDensity::cdf: 1-D densities only");
  switch (family_) {
    case Family::normal:
      return normal_cdf(x, first_[0], second_[0]);
    case Family::uniform:
      return std::clamp((x - first_[0]) / (second_[0] - first_[0]), 0.0, 1.0);
    case Family::quintic_pushforward: {
      if (x <= -1.0) return 0.0;
      if (x >= 1.0) return 1.0;
      return 0.5 * (1.0 + std::copysign(std::pow(std::abs(x), 0.2), x));
    }
  }
  return 0.0;
}

std::string AnalyticDensity::describe() const {
  std::ostringstream out;
  out.precision(17);
  switch (family_) {
    case Family::normal:
      out << "normal(";
      for (std::size_t k = 0; k < first_.size(); ++k)
        out << (k ? "; " : "") << first_[k] << ", " << second_[k];
      out << ")";
      break;
    case Family::uniform:
      out << "uniform(" << first_[0] << ", " << second_[0] << ")";
      break;
    case Family::quintic_pushforward:
      out << "quintic_pushforward";
      break;
  }
  return out.str();
}

// ------------------------------------------------------------- KdeDensity

std::string to_string(BandwidthRule rule) {
  switch (rule) {
    case BandwidthRule::scott:
      return "scott";
    case BandwidthRule::fixed:
      return "fixed";
  }
  return "unknown";
}

KdeDensity::KdeDensity(std::vector<double> centers, std::size_t dimension, std::vector<double> bandwidth)
    : centers_(std::move(centers)), dimension_(dimension), bandwidth_(std::move(bandwidth)) {
  if (dimension_ == 0) throw ConstructionError("kde: dimension must be positive");
  if (centers_.empty() || centers_.size() % dimension_ != 0)
    throw ConstructionError("kde: centre array is empty or not a multiple of the dimension");
  if (!all_finite(centers_)) throw ConstructionError("kde: non-finite centre");
  if (bandwidth_.size() != dimension_) throw ConstructionError("kde: one bandwidth per dimension");
  for (double h : bandwidth_) {
    if (!(h > 0.0) || !std::isfinite(h)) throw ConstructionError("kde: bandwidth must be positive");
  }
  if (dimension_ == 1) {
    std::vector<double> sorted = centers_;
    std::sort(sorted.begin(), sorted.end());
    fast_ = std::make_shared<const detail::GaussSum1d>(std::move(sorted), bandwidth_[0]);
  }
}

KdeDensity KdeDensity::fit(std::span<const double> points, std::size_t dimension, BandwidthRule rule) {
  if (dimension == 0 || points.size() % dimension != 0)
    throw ConstructionError("kde_fit: point array is not a multiple of the dimension");
  const std::size_t m = points.size() / dimension;
  if (m < 2) throw ConstructionError("kde_fit: need at least two samples");
  if (!all_finite(points)) throw ConstructionError("kde_fit: non-finite sample");
  if (rule != BandwidthRule::scott) throw ConstructionError("kde_fit: bandwidth rule needs data");

  const double factor = std::pow(static_cast<double>(m), -1.0 / (static_cast<double>(dimension) + 4.0));
  std::vector<double> bandwidth(dimension);
  for (std::size_t k = 0; k < dimension; ++k) {
    CompensatedSum sum;
    for (std::size_t i = 0; i < m; ++i) sum.add(points[i * dimension + k]);
    const double mean = sum.value() / static_cast<double>(m);
    CompensatedSum sq;
    for (std::size_t i = 0; i < m; ++i) {
      const double d = points[i * dimension + k] - mean;
      sq.add(d * d);
    }
    const double sd = std::sqrt(sq.value() / static_cast<double>(m - 1));
    if (!(sd > 0.0) || !std::isfinite(sd)) {
      std::ostringstream msg;
      msg << "kde_fit: degenerate samples (zero variance in coordinate " << k << ")";
      throw ConstructionError(msg.str());
    }
    bandwidth[k] = sd * factor;
  }
  KdeDensity kde(std::vector<double>(points.begin(), points.end()), dimension, std::move(bandwidth));
  kde.rule_ = rule;
  return kde;
}

KdeDensity kde_fit(std::span<const double> points, std::size_t dimension, BandwidthRule rule) {
  return KdeDensity::fit(points, dimension, rule);
}

void KdeDensity::value_and_gradient(std::span<const double> x, double& value, std::span<double> grad) const {
  const double m = static_cast<double>(size());
  if (fast_) {
    const double h = bandwidth_[0];
    const auto v = fast_->evaluate(x[0]);
    const double scale = kInvSqrt2Pi / (m * h);
    value = v.sum * scale;
    if (!grad.empty()) grad[0] = v.slope * scale / h;
    return;
  }
  double norm = 1.0;
  for (double h : bandwidth_) norm *= kInvSqrt2Pi / h;
  CompensatedSum total;
  std::vector<CompensatedSum> partial(grad.size());
  const std::size_t d = dimension_;
  for (std::size_t i = 0; i < size(); ++i) {
    double q = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double z = (x[k] - centers_[i * d + k]) / bandwidth_[k];
      q += z * z;
    }
    const double t = std::exp(-0.5 * q);
    total.add(t);
    for (std::size_t k = 0; k < grad.size(); ++k) {
      const double dz = (x[k] - centers_[i * d + k]) / (bandwidth_[k] * bandwidth_[k]);
      partial[k].add(-dz * t);
    }
  }
  value = total.value() * norm / m;
  for (std::size_t k = 0; k < grad.size(); ++k) grad[k] = partial[k].value() * norm / m;
}

double KdeDensity::eval(std::span<const double> x) const {
  check_dimension(x);
  double value = 0.0;
  value_and_gradient(x, value, {});
  return value;
}

std::vector<double> KdeDensity::gradient(std::span<const double> x) const {
  check_dimension(x);
  double value = 0.0;
  std::vector<double> grad(dimension_);
  value_and_gradient(x, value, grad);
  return grad;
}

double KdeDensity::derivative(double x) const {
  if (dimension_ != 1) throw std::invalid_argument("KdeDensity::derivative: 1-D only");
  return gradient(std::span<const double>(&x, 1))[0];
}

void KdeDensity::eval_with_gradient_many(std::span<const double> xs, std::span<double> dens,
                                         std::span<double> grad) const {
  const std::size_t d = dimension_;
  if (xs.size() != dens.size() * d || grad.size() != xs.size())
    throw std::invalid_argument("KdeDensity::eval_with_gradient_many: size mismatch");
  parallel_for(dens.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto x = xs.subspan(i * d, d);
      check_dimension(x);
      value_and_gradient(x, dens[i], grad.subspan(i * d, d));
    }
  });
}

std::string KdeDensity::describe() const {
  std::ostringstream out;
  out.precision(10);
  out << "kde(m=" << size() << ", d=" << dimension_ << ", rule=" << to_string(rule_) << ", h=";
  for (std::size_t k = 0; k < bandwidth_.size(); ++k) out << (k ? "," : "") << bandwidth_[k];
  out << ")";
  return out.str();
}

// -------------------------------------------------- SimpleFunctionDensity

SimpleFunctionDensity::SimpleFunctionDensity(std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (values_.empty() || breakpoints_.size() != values_.size() + 1)
    throw ConstructionError("simple function: need one more breakpoint than values");
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i] > breakpoints_[i - 1]))
      throw ConstructionError("simple function: breakpoints must be strictly increasing");
  }
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConstructionError("simple function: negative value");
  }
}

double SimpleFunctionDensity::eval(std::span<const double> x) const {
  check_dimension(x);
  const double q = x[0];
  if (q < breakpoints_.front() || q > breakpoints_.back()) return 0.0;
  if (q == breakpoints_.back()) return values_.back();
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), q);
  return values_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
}

double SimpleFunctionDensity::integral() const noexcept {
  CompensatedSum s;
  for (std::size_t i = 0; i < values_.size(); ++i)
    s.add((breakpoints_[i + 1] - breakpoints_[i]) * values_[i]);
  return s.value();
}

std::string SimpleFunctionDensity::describe() const {
  std::ostringstream out;
  out << "simple_function(" << values_.size() << " intervals on [" << breakpoints_.front() << ", "
      << breakpoints_.back() << "])";
  return out.str();
}

SimpleFunctionDensity pwl_pushforward_exact(const PiecewiseLinearMap& map) {
  const auto knots = map.knots();
  const auto vals = map.values();
  const std::size_t segments = map.segments();
  const double input_density = 1.0 / (knots.back() - knots.front());

  int direction = 0;
  for (std::size_t s = 0; s < segments; ++s) {
    const double slope = map.slope(s);
    if (slope == 0.0 || !std::isfinite(slope))
      throw UnsupportedInputError("pwl_pushforward_exact: zero-slope segment");
    const int sign = slope > 0.0 ? 1 : -1;
    if (direction != 0 && sign != direction)
      throw UnsupportedInputError("pwl_pushforward_exact: map is not monotone");
    direction = sign;
  }

  std::vector<double> breaks(vals.begin(), vals.end());
  std::vector<double> values(segments);
  for (std::size_t s = 0; s < segments; ++s) values[s] = input_density / std::abs(map.slope(s));
  if (direction < 0) {
    std::reverse(breaks.begin(), breaks.end());
    std::reverse(values.begin(), values.end());
  }
  return SimpleFunctionDensity(std::move(breaks), std::move(values));
}

}  // namespace uqdc
