#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace uqdc::detail {

/// Sum of unit Gaussian bumps sum_j exp(-(x - c_j)^2 / (2 h^2)) over sorted
/// 1-D centres, and its derivative with respect to x / h.
///
/// Centres are grouped into bins of width h/4. A bin holding more than a few
/// centres is replaced by a truncated Taylor expansion of exp(u v) about its
/// midpoint, where u = (x - mid)/h and |v| <= 1/8; with the 12h interaction
/// cutoff |u v| stays below 1.52 and 24 terms leave a per-term relative error
/// under 1e-18. Bins farther than 12h are skipped; their total contribution is
/// below exp(-72) of one kernel peak. When no bin lies inside the cutoff the
/// sum falls back to direct evaluation over every centre within 39h, past
/// which exp underflows to zero.
class GaussSum1d {
 public:
  static constexpr std::size_t kTerms = 24;
  static constexpr double kCutoff = 12.0;
  static constexpr double kFarCutoff = 39.0;

  GaussSum1d(std::vector<double> sorted_centers, double bandwidth);

  struct Value {
    double sum = 0.0;
    double slope = 0.0;  // d(sum)/d(x/h)
  };

  [[nodiscard]] Value evaluate(double x) const noexcept;

  [[nodiscard]] std::span<const double> centers() const noexcept { return centers_; }
  [[nodiscard]] double bandwidth() const noexcept { return h_; }
  [[nodiscard]] std::size_t bin_count() const noexcept { return mids_.size(); }

 private:
  struct Bin {
    std::size_t begin = 0;
    std::size_t end = 0;
    bool expanded = false;
    std::array<double, kTerms> moments{};
  };

  [[nodiscard]] Value direct(double x, std::size_t begin, std::size_t end) const noexcept;

  std::vector<double> centers_;
  double h_;
  std::vector<double> mids_;
  std::vector<Bin> bins_;
};

}  // namespace uqdc::detail
