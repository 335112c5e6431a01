#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "uqdc/maps.hpp"
#include "uqdc/rng.hpp"

using doctest::Approx;

TEST_SUITE("maps") {
  TEST_CASE("ode exact map") {
    CHECK(uqdc::ode_exact_map(0.0) == 1.0);
    CHECK(uqdc::ode_exact_map(2.0) == Approx(0.3678794).epsilon(1e-7));
    CHECK(uqdc::ode_exact_map(-2.0) == Approx(2.7182818).epsilon(1e-7));
  }

  TEST_CASE("pde qoi limits and symmetry") {
    for (double l2 : {-3.0, 0.0, 0.7, 2.5}) CHECK(uqdc::pde_exact_qoi(0.0, l2) == 0.0);
    const uqdc::CounterRng rng(11);
    for (int i = 0; i < 100; ++i) {
      const double a = 3.0 * rng.normal(2 * i), b = 3.0 * rng.normal(2 * i + 1);
      CHECK(uqdc::pde_exact_qoi(-a, b) == Approx(-uqdc::pde_exact_qoi(a, b)).epsilon(1e-14));
      CHECK(std::abs(uqdc::pde_exact_qoi(a, b)) <= 1.0);
    }
    const double ref = oracle::integrate([](double x) { return std::sin(M_PI * x); }, 0.4, 0.6) * 0.2 / 0.04;
    CHECK(ref == Approx(0.9836316).epsilon(1e-7));
    CHECK(uqdc::pde_exact_qoi(1.0, 0.0) == Approx(ref).epsilon(1e-12));
  }

  TEST_CASE("pde qoi matches 2-D quadrature of the manufactured solution") {
    const uqdc::CounterRng rng(5);
    for (int i = 0; i < 50; ++i) {
      const double a = 4.0 * rng.normal(2 * i), b = 4.0 * rng.normal(2 * i + 1);
      const double ref = oracle::integrate(
                             [&](double y) {
                               return oracle::integrate([&](double x) { return std::sin(a * M_PI * x); }, 0.4, 0.6) *
                                      std::cos(b * M_PI * y);
                             },
                             0.4, 0.6) /
                         0.04;
      CHECK(uqdc::pde_exact_qoi(a, b) == Approx(ref).epsilon(1e-8).scale(1e-12));
    }
  }

  TEST_CASE("pde qoi is smooth across the series branch") {
    const double small = 1e-8;
    CHECK(uqdc::pde_exact_qoi(small * 0.999, 1.0) == Approx(uqdc::pde_exact_qoi(small * 1.001, 1.0)).epsilon(1e-2));
    CHECK(uqdc::pde_exact_qoi(1.0, small * 0.999) == Approx(uqdc::pde_exact_qoi(1.0, small * 1.001)).epsilon(1e-12));
  }

  TEST_CASE("quintic map") {
    CHECK(uqdc::quintic_map(0.0) == 0.0);
    CHECK(uqdc::quintic_map(1.0) == 1.0);
    CHECK(uqdc::quintic_map(0.5) == 0.03125);
  }

  TEST_CASE("piecewise-linear surrogate") {
    const auto s1 = uqdc::pwl_surrogate(1);
    REQUIRE(s1.knots().size() == 3);
    CHECK(s1.knots()[0] == -1.0);
    CHECK(s1.knots()[1] == 0.0);
    CHECK(s1.knots()[2] == 1.0);
    CHECK(s1(0.5) == Approx(0.5));
    CHECK(uqdc::pwl_surrogate(3).slope(2) == Approx(0.0625).epsilon(1e-14));
    for (unsigned n : {1u, 2u, 5u, 16u, 31u}) {
      const auto s = uqdc::pwl_surrogate(n);
      REQUIRE(s.knots().size() == n + 2);
      for (std::size_t k = 0; k < s.knots().size(); ++k) {
        CHECK(s.knots()[k] == Approx(-1.0 + 2.0 * k / (n + 1.0)).epsilon(1e-15));
        CHECK(s(s.knots()[k]) == uqdc::quintic_map(s.knots()[k]));
      }
      for (std::size_t seg = 0; seg < s.segments(); ++seg) CHECK(s.slope(seg) > 0.0);
    }
    CHECK_THROWS_AS((void)uqdc::pwl_surrogate(0), std::invalid_argument);
    CHECK_THROWS_AS((void)s1(1.5), uqdc::DomainError);
  }

  TEST_CASE("surrogate converges in L1") {
    const uqdc::CounterRng rng(9);
    const auto err = [&](unsigned n) {
      const auto s = uqdc::pwl_surrogate(n);
      double sum = 0.0;
      for (int i = 0; i < 20000; ++i) {
        const double x = -1.0 + 2.0 * rng.uniform(i);
        sum += std::abs(s(x) - std::pow(x, 5));
      }
      return sum / 20000;
    };
    CHECK(err(16) * 10.0 < err(1));
  }

  TEST_CASE("qoi map wrapper checks dimension") {
    const auto m = uqdc::qoi::pde();
    const double p[2] = {1.0, 0.0};
    CHECK(m(std::span<const double>(p, 2)) == Approx(uqdc::pde_exact_qoi(1.0, 0.0)));
    CHECK_THROWS((void)m(1.0));
    CHECK(m(std::span<const double>(p, 2)) == m(std::span<const double>(p, 2)));
  }
}
