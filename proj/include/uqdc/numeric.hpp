#pragma once

#include <cmath>
#include <numbers>
#include <span>

namespace uqdc {

inline constexpr double kInvSqrt2Pi = 0.3989422804014327;  // 1/sqrt(2*pi)

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

[[nodiscard]] inline double compensated_mean(std::span<const double> xs) noexcept {
  if (xs.empty()) return 0.0;
  CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value() / static_cast<double>(xs.size());
}

[[nodiscard]] inline double normal_pdf(double x, double mean, double std) noexcept {
  const double z = (x - mean) / std;
  return kInvSqrt2Pi / std * std::exp(-0.5 * z * z);
}

[[nodiscard]] inline double normal_cdf(double x, double mean, double std) noexcept {
  return 0.5 * std::erfc(-(x - mean) / (std * std::numbers::sqrt2));
}

}  // namespace uqdc
