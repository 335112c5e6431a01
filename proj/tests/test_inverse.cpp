#include <doctest.h>

#include <cmath>
#include <memory>

#include "uqdc/diagnostics.hpp"
#include "uqdc/forward.hpp"
#include "uqdc/inverse.hpp"
#include "uqdc/numeric.hpp"
#include "uqdc/polychaos.hpp"
#include "uqdc/rng.hpp"

using doctest::Approx;
using uqdc::AnalyticDensity;

namespace {

std::shared_ptr<const AnalyticDensity> shared(AnalyticDensity d) {
  return std::make_shared<const AnalyticDensity>(std::move(d));
}

struct OdeSetup {
  std::shared_ptr<const AnalyticDensity> initial = shared(AnalyticDensity::normal(0.0, 1.0));
  std::shared_ptr<const AnalyticDensity> observed = shared(AnalyticDensity::normal(1.0, 0.1));
  std::shared_ptr<const uqdc::SampleSet> samples =
      std::make_shared<const uqdc::SampleSet>(uqdc::draw_initial(*initial, 10000, 0));
};

}  // namespace

TEST_SUITE("inverse") {
  TEST_CASE("identical observed and push-forward give unit ratio") {
    // A wide observed density keeps every sampled output above the ratio floor.
    OdeSetup s;
    s.observed = shared(AnalyticDensity::normal(1.0, 1.0));
    const auto u = uqdc::UpdatedDensity(s.initial, s.observed, s.observed, uqdc::qoi::ode());
    for (double l : {-2.0, 0.0, 0.5, 3.0}) {
      CHECK(*u.ratio(l) == 1.0);
      CHECK(*u.updated(l) == s.initial->eval(l));
    }
    CHECK(uqdc::expected_ratio(u, *s.samples) == Approx(1.0).epsilon(1e-15));
    const auto rej = uqdc::rejection_sample(u, *s.samples, 5);
    CHECK(rej.accepted_count() == s.samples->size());
    const auto probes = uqdc::predictability_probes(1.0, 1.0);
    const auto v = uqdc::predictability_check(*s.observed, *s.observed, probes);
    CHECK(v.constant == 1.0);
    CHECK(v.violation_fraction == 0.0);
  }

  TEST_CASE("ratio unrolls to the composed definition") {
    OdeSetup s;
    const auto pf = uqdc::build_pushforward(uqdc::qoi::ode(), s.samples);
    const uqdc::UpdatedDensity u(s.initial, s.observed, pf.shared_kde(), uqdc::qoi::ode());
    CHECK(*u.ratio(0.0) == Approx(s.observed->eval(1.0) / pf.kde().eval(1.0)).epsilon(1e-15));
    CHECK(s.observed->eval(1.0) == Approx(3.9894228).epsilon(1e-7));
    const auto q5 = uqdc::qoi::from(uqdc::galerkin_ode_solve(5, 0.5), "n=5");
    const auto pf5 = uqdc::build_pushforward(q5, s.samples);
    const uqdc::UpdatedDensity u5(s.initial, s.observed, pf5.shared_kde(), q5);
    const double q = q5(0.0);
    CHECK(*u5.updated(0.0) == Approx(s.initial->eval(0.0) * s.observed->eval(q) / pf5.kde().eval(q)).epsilon(1e-15));
  }

  TEST_CASE("undefined ratios and zero prior mass") {
    const auto initial = shared(AnalyticDensity::uniform(-1.0, 1.0));
    const auto observed = shared(AnalyticDensity::normal(1.0, 0.1));
    const auto exact_pf = std::make_shared<const uqdc::SimpleFunctionDensity>(
        uqdc::pwl_pushforward_exact(uqdc::pwl_surrogate(3)));
    const uqdc::UpdatedDensity u(initial, observed, exact_pf, uqdc::qoi::quintic());
    CHECK_FALSE(u.ratio_at_output(1.5).has_value());
    CHECK(u.ratio_at_output(0.9).has_value());
    CHECK(*u.updated(2.0) == 0.0);
    const auto probes = uqdc::predictability_probes(1.0, 0.1);
    CHECK(uqdc::predictability_check(*observed, *exact_pf, probes).violation_fraction > 0.3);
    const auto analytic = AnalyticDensity::quintic_pushforward();
    CHECK(uqdc::predictability_check(*observed, analytic, probes).violation_fraction > 0.3);
    CHECK(uqdc::expected_ratio(std::vector<double>{1.0, NAN, 2.0, NAN}) == 0.75);
  }

  TEST_CASE("all-undefined ratios are an error") {
    const auto set = uqdc::draw_initial(AnalyticDensity::uniform(-1.0, 1.0), 10, 1);
    const std::vector<double> r(10, NAN);
    CHECK_THROWS_AS((void)uqdc::rejection_sample_ratios(r, set, 1, 2), uqdc::EmptyResultError);
  }

  TEST_CASE("rejection sampling statistics") {
    OdeSetup s;
    const auto q5 = uqdc::qoi::from(uqdc::galerkin_ode_solve(5, 0.5), "n=5");
    const auto pf = uqdc::build_pushforward(q5, s.samples);
    const uqdc::UpdatedDensity u(s.initial, s.observed, pf.shared_kde(), q5);
    const auto proposals = uqdc::draw_initial(*s.initial, 10000, 99, uqdc::derive_stream("proposals"));
    const auto ratios = u.ratios(proposals);
    const auto rej = uqdc::rejection_sample_ratios(ratios, proposals, 99, uqdc::derive_stream("rejection"));
    CHECK(rej.accepted_count() <= rej.proposal_count);
    for (std::size_t a = 0; a < rej.accepted_count(); ++a)
      CHECK(rej.accepted[a] == proposals.points[rej.accepted_indices[a]]);
    const double expected_rate = uqdc::expected_ratio(ratios) / rej.bound;
    const double sd = std::sqrt(expected_rate * (1 - expected_rate) / 10000);
    CHECK(std::abs(rej.acceptance_rate() - expected_rate) < 3 * sd);

    const auto again = uqdc::rejection_sample_ratios(ratios, proposals, 99, uqdc::derive_stream("rejection"));
    CHECK(again.accepted_indices == rej.accepted_indices);
    CHECK(rej.to_csv().rfind("proposal_index,lambda\n", 0) == 0);
  }

  // Same seeds and streams the experiment pipeline uses for replicate 0.
  TEST_CASE("accepted samples push forward to the observed density") {
    OdeSetup s;
    const auto q5 = uqdc::qoi::from(uqdc::galerkin_ode_solve(5, 0.5), "n=5");
    const auto pf = uqdc::build_pushforward(q5, s.samples);
    const uqdc::UpdatedDensity u(s.initial, s.observed, pf.shared_kde(), q5);
    const auto proposals = uqdc::draw_initial(*s.initial, 10000, 0, uqdc::derive_stream("proposals", 5));
    const auto rej = uqdc::rejection_sample(u, proposals, 0, uqdc::derive_stream("rejection", 5));
    uqdc::SampleSet acc;
    acc.points = rej.accepted;
    const auto q = uqdc::evaluate_map(q5, acc);
    const double ks = uqdc::ks_statistic(q, [&](double x) { return s.observed->cdf(x); });
    MESSAGE("accepted " << rej.accepted_count() << " of 10000, KS " << ks);
    CHECK(ks < 0.02);
  }

  TEST_CASE("rejection sampling ignores the scale of the observed density") {
    OdeSetup s;
    const auto pf = uqdc::build_pushforward(uqdc::qoi::ode(), s.samples);
    const uqdc::UpdatedDensity u(s.initial, s.observed, pf.shared_kde(), uqdc::qoi::ode());
    const auto r = u.ratios(*s.samples);
    const auto base = uqdc::rejection_sample_ratios(r, *s.samples, 3, 4);
    for (double c : {0.5, 2.0, 3.7, 1e3}) {
      std::vector<double> scaled = r;
      for (double& v : scaled) v *= c;
      CHECK(uqdc::rejection_sample_ratios(scaled, *s.samples, 3, 4).accepted_indices == base.accepted_indices);
    }
  }

  TEST_CASE("expected ratio equals the mean of updated over initial") {
    OdeSetup s;
    const auto pf = uqdc::build_pushforward(uqdc::qoi::ode(), s.samples);
    const uqdc::UpdatedDensity u(s.initial, s.observed, pf.shared_kde(), uqdc::qoi::ode());
    uqdc::CompensatedSum sum;
    for (std::size_t i = 0; i < s.samples->size(); ++i) {
      const auto up = u.updated(s.samples->point(i));
      sum.add(up ? *up / s.initial->eval(s.samples->point(i)) : 0.0);
    }
    CHECK(uqdc::expected_ratio(u, *s.samples) == Approx(sum.value() / s.samples->size()).epsilon(1e-12));
  }

  TEST_CASE("ode predictability holds for n >= 2") {
    OdeSetup s;
    const auto probes = uqdc::predictability_probes(1.0, 0.1);
    for (unsigned n = 2; n <= 5; ++n) {
      const auto pf = uqdc::build_pushforward(uqdc::qoi::from(uqdc::galerkin_ode_solve(n, 0.5), "n"), s.samples);
      CHECK(uqdc::predictability_check(*s.observed, pf.kde(), probes).violation_fraction < 0.01);
    }
  }
}
