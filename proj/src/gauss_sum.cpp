#include "uqdc/gauss_sum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uqdc::detail {
namespace {

constexpr double kBinWidth = 0.25;      // in bandwidth units
constexpr std::size_t kDirectMax = 6;  // bins this small are summed directly

}  // namespace

GaussSum1d::GaussSum1d(std::vector<double> sorted_centers, double bandwidth)
    : centers_(std::move(sorted_centers)), h_(bandwidth) {
  if (centers_.empty()) throw std::invalid_argument("GaussSum1d: no centres");
  if (!(h_ > 0.0) || !std::isfinite(h_)) throw std::invalid_argument("GaussSum1d: bad bandwidth");
  if (!std::is_sorted(centers_.begin(), centers_.end()))
    throw std::invalid_argument("GaussSum1d: centres must be sorted");

  const double width = kBinWidth * h_;
  const double origin = centers_.front();
  std::size_t i = 0;
  while (i < centers_.size()) {
    const double slot = std::floor((centers_[i] - origin) / width);
    const double lo = origin + slot * width;
    const double hi = lo + width;
    std::size_t j = i;
    while (j < centers_.size() && centers_[j] < hi) ++j;
    if (j == i) ++j;  // rounding guard, keeps the loop moving

    Bin bin;
    bin.begin = i;
    bin.end = j;
    const double mid = 0.5 * (lo + hi);
    if (j - i > kDirectMax) {
      bin.expanded = true;
      for (std::size_t c = i; c < j; ++c) {
        const double v = (centers_[c] - mid) / h_;
        double term = std::exp(-0.5 * v * v);
        for (std::size_t k = 0; k < kTerms; ++k) {
          bin.moments[k] += term;
          term *= v / static_cast<double>(k + 1);
        }
      }
    }
    mids_.push_back(mid);
    bins_.push_back(bin);
    i = j;
  }
}

GaussSum1d::Value GaussSum1d::direct(double x, std::size_t begin, std::size_t end) const noexcept {
  Value out;
  for (std::size_t c = begin; c < end; ++c) {
    const double z = (x - centers_[c]) / h_;
    const double t = std::exp(-0.5 * z * z);
    out.sum += t;
    out.slope -= z * t;
  }
  return out;
}

GaussSum1d::Value GaussSum1d::evaluate(double x) const noexcept {
  const double reach = kCutoff * h_ + 0.5 * kBinWidth * h_;
  const auto first = std::lower_bound(mids_.begin(), mids_.end(), x - reach);
  const auto last = std::upper_bound(first, mids_.end(), x + reach);
  if (first == last) {
    const auto lo = std::lower_bound(centers_.begin(), centers_.end(), x - kFarCutoff * h_);
    const auto hi = std::upper_bound(lo, centers_.end(), x + kFarCutoff * h_);
    return direct(x, static_cast<std::size_t>(lo - centers_.begin()),
                  static_cast<std::size_t>(hi - centers_.begin()));
  }

  Value out;
  for (auto it = first; it != last; ++it) {
    const Bin& bin = bins_[static_cast<std::size_t>(it - mids_.begin())];
    if (!bin.expanded) {
      const Value v = direct(x, bin.begin, bin.end);
      out.sum += v.sum;
      out.slope += v.slope;
      continue;
    }
    // exp(-(u - v)^2/2) = exp(-u^2/2) exp(-v^2/2) exp(u v)
    const double u = (x - *it) / h_;
    double poly = bin.moments[kTerms - 1];
    double dpoly = 0.0;
    for (std::size_t k = kTerms - 1; k-- > 0;) {
      dpoly = dpoly * u + poly;
      poly = poly * u + bin.moments[k];
    }
    const double g = std::exp(-0.5 * u * u);
    out.sum += g * poly;
    out.slope += g * (dpoly - u * poly);
  }
  return out;
}

}  // namespace uqdc::detail
