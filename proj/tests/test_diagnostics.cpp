#include <doctest.h>

#include <cmath>
#include <memory>

#include "uqdc/diagnostics.hpp"
#include "uqdc/numeric.hpp"

using doctest::Approx;
using uqdc::AnalyticDensity;
using uqdc::KdeDensity;

namespace {

class Constant final : public uqdc::Density {
 public:
  explicit Constant(double v) : v_(v) {}
  std::size_t dimension() const noexcept override { return 1; }
  double eval(std::span<const double>) const override { return v_; }
  using Density::eval;
  std::string describe() const override { return "constant"; }

 private:
  double v_;
};

}  // namespace

TEST_SUITE("diagnostics") {
  TEST_CASE("bounds and lipschitz constants of simple kdes") {
    const KdeDensity one({0.0}, 1, {0.5});
    const double c = 0.0;
    CHECK(uqdc::density_bound(one, std::span<const double>(&c, 1)) ==
          Approx(1.0 / (0.5 * std::sqrt(2 * M_PI))).epsilon(1e-14));
    const KdeDensity two({-1.0, 1.0}, 1, {0.5});
    std::vector<double> grid;
    for (int k = -3000; k <= 3000; ++k) grid.push_back(k * 1e-3);
    const double L = uqdc::lipschitz_estimate(two, grid);
    double arg = 0.0, best = 0.0;
    for (double x : grid) {
      const double g = std::abs(two.derivative(x));
      if (g > best) {
        best = g;
        arg = x;
      }
    }
    CHECK(L == best);
    CHECK(std::abs(arg) > 0.1);
    CHECK(std::abs(std::abs(two.derivative(arg)) - std::abs(two.derivative(-arg))) < 1e-14);
  }

  TEST_CASE("max over a superset does not decrease") {
    const auto samples = std::make_shared<const uqdc::SampleSet>(
        uqdc::draw_initial(AnalyticDensity::normal(0.0, 1.0), 2000, 5));
    const uqdc::QoiMap sq("sq", 1, [](std::span<const double> x) { return x[0] * x[0]; });
    const auto pf = uqdc::build_pushforward(sq, samples);
    const double b = uqdc::density_bound(pf);
    const double l = uqdc::lipschitz_estimate(pf);
    std::vector<double> probes(pf.outputs().begin(), pf.outputs().end());
    std::size_t arg = 0;
    for (std::size_t i = 0; i < probes.size(); ++i)
      if (pf.kde().eval(probes[i]) > pf.kde().eval(probes[arg])) arg = i;
    probes.push_back(probes[arg]);
    CHECK(uqdc::density_bound(pf.kde(), probes) >= b);
    CHECK(uqdc::lipschitz_estimate(pf.kde(), probes) >= l);
    CHECK(uqdc::lipschitz_estimate(pf, uqdc::ProbeSet::dense_grid) >= 0.9 * l);
  }

  TEST_CASE("data-space norms") {
    const Constant c(0.3), z(0.0);
    const uqdc::Interval region{0.0, 4.0};
    for (double r : {1.0, 2.0, 3.5}) CHECK(uqdc::lr_norm_data(c, z, r, region, 100, 1) ==
                                           Approx(0.3 * std::pow(4.0, 1.0 / r)).epsilon(1e-12));
    CHECK(uqdc::lr_norm_data(c, c, 2.0, region, 100, 1) == 0.0);
    const auto n = AnalyticDensity::normal(0.0, 1.0);
    const double est = uqdc::lr_norm_data(n, z, 2.0, {-5.0, 5.0}, 100000, 3);
    CHECK(std::abs(est - std::sqrt(1.0 / (2.0 * std::sqrt(M_PI)))) < 0.01);
    CHECK_THROWS_AS((void)uqdc::lr_norm_data(c, z, 0.5, region, 10, 1), std::invalid_argument);
  }

  TEST_CASE("data-space norm error halves when N quadruples") {
    const auto n = AnalyticDensity::normal(0.0, 1.0);
    const Constant z(0.0);
    const double truth = std::sqrt(1.0 / (2.0 * std::sqrt(M_PI)));
    const auto spread = [&](std::size_t N) {
      double sq = 0.0;
      for (std::uint64_t s = 0; s < 20; ++s) {
        const double e = uqdc::lr_norm_data(n, z, 2.0, {-5.0, 5.0}, N, 1000 + s) - truth;
        sq += e * e;
      }
      return std::sqrt(sq / 20);
    };
    const double ratio = spread(2000) / spread(8000);
    CHECK(ratio > 2.0 / 1.3);
    CHECK(ratio < 2.0 * 1.3);
  }

  TEST_CASE("parameter-space norms") {
    const auto set = uqdc::draw_initial(AnalyticDensity::normal(0.0, 1.0), 100000, 2);
    const uqdc::ParamFunction id = [](std::span<const double> x) { return x[0]; };
    const uqdc::ParamFunction zero = [](std::span<const double>) { return 0.0; };
    const uqdc::ParamFunction shift = [](std::span<const double> x) { return x[0] + 0.7; };
    CHECK(uqdc::lp_norm_param(id, id, 2.0, set) == 0.0);
    for (double p : {1.0, 2.0, 4.0}) CHECK(uqdc::lp_norm_param(shift, id, p, set) == Approx(0.7).epsilon(1e-12));
    CHECK(std::abs(uqdc::lp_norm_param(id, zero, 2.0, set) - 1.0) < 0.02);
    CHECK_THROWS_AS((void)uqdc::lp_norm_param(id, zero, 0.9, set), std::invalid_argument);
  }

  TEST_CASE("ks statistic") {
    const std::vector<double> xs = {0.1, 0.4, 0.6, 0.9};
    CHECK(uqdc::ks_statistic(xs, [](double x) { return x; }) == Approx(0.15));
    const auto set = uqdc::draw_initial(AnalyticDensity::normal(0.0, 1.0), 20000, 4);
    CHECK(uqdc::ks_statistic(set.points, [](double x) { return uqdc::normal_cdf(x, 0.0, 1.0); }) < 0.015);
    CHECK(uqdc::ks_statistic(set.points, [](double x) { return uqdc::normal_cdf(x, 0.2, 1.0); }) > 0.05);
  }

  TEST_CASE("table csv layout") {
    uqdc::BoundTable t{"B", {1000, 10000}, {1, 2, 4}, {1, 2, 3, 4, 5, 6.5}};
    CHECK(t.to_csv() == "m\\n,1,2,4\n1000,1,2,3\n10000,4,5,6.5\n");
    CHECK(t.to_json()["values"][1][2] == 6.5);
    std::vector<uqdc::ErrorCurve> curves = {{"pushforward", "data", 1, "[0, 4]", 10, 0, {1, 2}, {0.5, 0.25}},
                                            {"pushforward", "data", 2, "[0, 4]", 10, 0, {1, 2}, {0.4, 0.2}}};
    CHECK(uqdc::curves_to_csv(curves) == "r\\n,1,2\n1,0.5,0.25\n2,0.4,0.2\n");
  }
}
