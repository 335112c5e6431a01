#include <doctest.h>

#include <cmath>
#include <memory>

#include "uqdc/density.hpp"
#include "uqdc/forward.hpp"
#include "uqdc/numeric.hpp"

using doctest::Approx;
using uqdc::AnalyticDensity;

TEST_SUITE("forward") {
  TEST_CASE("initial draws") {
    const auto set = uqdc::draw_initial(AnalyticDensity::normal(0.0, 1.0), 10000, 7);
    CHECK(set.size() == 10000);
    CHECK(std::abs(uqdc::compensated_mean(set.points)) < 4.0 / std::sqrt(10000.0));
    const auto again = uqdc::draw_initial(AnalyticDensity::normal(0.0, 1.0), 10000, 7);
    CHECK(set.points == again.points);
    const auto other = uqdc::draw_initial(AnalyticDensity::normal(0.0, 1.0), 10000, 8);
    CHECK(set.points != other.points);
    const auto small = uqdc::draw_initial(AnalyticDensity::normal(0.0, 1.0), 100, 7);
    for (std::size_t i = 0; i < 100; ++i) CHECK(small.points[i] == set.points[i]);
    CHECK(set.prefix(100).points == small.points);
    CHECK_THROWS_AS((void)uqdc::draw_initial(AnalyticDensity::normal(0.0, 1.0), 0, 7), std::invalid_argument);
    CHECK_THROWS_AS((void)uqdc::draw_initial(AnalyticDensity::quintic_pushforward(), 10, 7),
                    uqdc::UnsupportedInputError);
  }

  TEST_CASE("2-D and uniform draws") {
    const auto set = uqdc::draw_initial(AnalyticDensity::normal({0.0, 0.0}, {0.1, 0.1}), 10000, 3);
    CHECK(set.dimension == 2);
    for (int k = 0; k < 2; ++k) {
      double s = 0.0, sq = 0.0;
      for (std::size_t i = 0; i < set.size(); ++i) {
        s += set.point(i)[k];
        sq += set.point(i)[k] * set.point(i)[k];
      }
      const double mean = s / set.size();
      const double sd = std::sqrt(sq / set.size() - mean * mean);
      CHECK(std::abs(sd - 0.1) < 0.01);
    }
    const auto u = uqdc::draw_initial(AnalyticDensity::uniform(-1.0, 1.0), 5000, 3);
    for (double v : u.points) {
      REQUIRE(v >= -1.0);
      REQUIRE(v < 1.0);
    }
  }

  TEST_CASE("identity push-forward recovers the standard normal") {
    auto samples = std::make_shared<const uqdc::SampleSet>(
        uqdc::draw_initial(AnalyticDensity::normal(0.0, 1.0), 100000, 1));
    const uqdc::QoiMap identity("identity", 1, [](std::span<const double> x) { return x[0]; });
    const auto pf = uqdc::build_pushforward(identity, samples);
    CHECK(std::abs(pf.kde().eval(0.0) - 0.3989) < 0.02);
    CHECK(std::abs(pf.eval_composed(0.0) - 0.3989) < 0.02);
    for (std::size_t i = 0; i < 10; ++i) {
      CHECK(pf.outputs()[i] == samples->points[i]);
      CHECK(pf.eval_composed(samples->point(i)) == pf.kde().eval(pf.outputs()[i]));
    }
    const auto composed = pf.composed_at_samples();
    CHECK(composed[5] == pf.kde().eval(pf.outputs()[5]));
  }

  TEST_CASE("kde error to a known push-forward shrinks with m") {
    const uqdc::QoiMap linear("linear", 1, [](std::span<const double> x) { return 2.0 * x[0] + 1.0; });
    const auto all = uqdc::draw_initial(AnalyticDensity::normal(0.0, 1.0), 100000, 12);
    double previous = INFINITY;
    for (std::size_t m : {1000u, 10000u, 100000u}) {
      const auto pf = uqdc::build_pushforward(linear, std::make_shared<const uqdc::SampleSet>(all.prefix(m)));
      double l1 = 0.0;
      const int grid = 4000;
      for (int k = 0; k < grid; ++k) {
        const double q = -9.0 + 20.0 * (k + 0.5) / grid;
        l1 += std::abs(pf.kde().eval(q) - uqdc::normal_pdf(q, 1.0, 2.0)) * 20.0 / grid;
      }
      CHECK(l1 < previous);
      previous = l1;
    }
  }

  TEST_CASE("constant map has a degenerate push-forward") {
    auto samples = std::make_shared<const uqdc::SampleSet>(
        uqdc::draw_initial(AnalyticDensity::normal(0.0, 1.0), 100, 1));
    const uqdc::QoiMap constant("constant", 1, [](std::span<const double>) { return 2.5; });
    CHECK_THROWS_AS((void)uqdc::build_pushforward(constant, samples), uqdc::ConstructionError);
    const auto outputs = uqdc::evaluate_map(constant, *samples);
    for (double q : outputs) CHECK(q == 2.5);
  }

  TEST_CASE("quintic interpolant plateau") {
    auto samples = std::make_shared<const uqdc::SampleSet>(
        uqdc::draw_initial(AnalyticDensity::uniform(-1.0, 1.0), 100000, 4));
    const auto pf = uqdc::build_pushforward(uqdc::qoi::from(uqdc::pwl_surrogate(3), "n=3"), samples);
    CHECK(pf.kde().eval(0.0) >= 4.0);
    CHECK(pf.kde().eval(0.0) < 8.0);
  }

  TEST_CASE("map failures carry the sample index") {
    auto samples = std::make_shared<const uqdc::SampleSet>(
        uqdc::draw_initial(AnalyticDensity::normal(0.0, 1.0), 1000, 1));
    const uqdc::QoiMap bad("bad", 1, [](std::span<const double> x) -> double {
      if (x[0] > 2.0) throw std::runtime_error("out of range");
      return x[0];
    });
    std::size_t first = 0;
    while (samples->points[first] <= 2.0) ++first;
    try {
      (void)uqdc::build_pushforward(bad, samples);
      FAIL("expected failure");
    } catch (const uqdc::MapEvaluationError& e) {
      CHECK(samples->points[e.sample_index()] > 2.0);
    }
  }

  TEST_CASE("csv export") {
    auto samples = std::make_shared<const uqdc::SampleSet>(
        uqdc::draw_initial(AnalyticDensity::normal({0.0, 0.0}, {1.0, 1.0}), 3, 1));
    const auto pf = uqdc::build_pushforward(uqdc::qoi::pde(), samples, "exact");
    const std::string csv = pf.to_csv();
    CHECK(csv.rfind("sample_index,lambda1,lambda2,q\n0,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  }
}
