#include "uqdc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "uqdc/csv.hpp"
#include "uqdc/numeric.hpp"
#include "uqdc/parallel.hpp"
#include "uqdc/rng.hpp"

namespace uqdc {
namespace {

void check_norm_order(double r, const char* who) {
  if (!(r >= 1.0) || !std::isfinite(r)) throw std::invalid_argument(std::string(who) + ": norm order must be >= 1");
}

double power_mean(std::span<const double> f, std::span<const double> g, double r) {
  if (f.size() != g.size()) throw std::invalid_argument("norm estimate: value arrays differ in length");
  if (f.empty()) throw std::invalid_argument("norm estimate: no points");
  CompensatedSum s;
  for (std::size_t i = 0; i < f.size(); ++i) s.add(std::pow(std::abs(f[i] - g[i]), r));
  return s.value() / static_cast<double>(f.size());
}

std::vector<double> probe_points(const PushforwardEnsemble& pf, ProbeSet probes) {
  if (probes == ProbeSet::dense_grid) return dense_probe_grid(pf.kde());
  return std::vector<double>(pf.outputs().begin(), pf.outputs().end());
}

}  // namespace

double density_bound(const KdeDensity& kde, std::span<const double> probes) {
  const std::vector<double> values = kde.eval_many(probes);
  double best = 0.0;
  for (double v : values) best = std::max(best, v);
  return best;
}

double density_bound(const PushforwardEnsemble& pf, ProbeSet probes) {
  return density_bound(pf.kde(), probe_points(pf, probes));
}

double lipschitz_estimate(const KdeDensity& kde, std::span<const double> probes) {
  const std::size_t d = kde.dimension();
  const std::size_t count = probes.size() / d;
  std::vector<double> dens(count);
  std::vector<double> grad(probes.size());
  kde.eval_with_gradient_many(probes, dens, grad);
  double best = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    double sq = 0.0;
    for (std::size_t k = 0; k < d; ++k) sq += grad[i * d + k] * grad[i * d + k];
    best = std::max(best, std::sqrt(sq));
  }
  return best;
}

double lipschitz_estimate(const PushforwardEnsemble& pf, ProbeSet probes) {
  return lipschitz_estimate(pf.kde(), probe_points(pf, probes));
}

std::vector<double> dense_probe_grid(const KdeDensity& kde, std::size_t count) {
  if (kde.dimension() != 1) throw std::invalid_argument("dense_probe_grid: 1-D only");
  if (count < 2) throw std::invalid_argument("dense_probe_grid: need at least two points");
  const auto c = kde.centers();
  const auto [lo_it, hi_it] = std::minmax_element(c.begin(), c.end());
  const double h = kde.bandwidth()[0];
  const double lo = *lo_it - 5.0 * h;
  const double hi = *hi_it + 5.0 * h;
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  return out;
}

std::vector<double> uniform_points(Interval region, std::size_t count, std::uint64_t seed) {
  if (!(region.hi > region.lo)) throw std::invalid_argument("uniform_points: empty region");
  const CounterRng rng(seed, derive_stream("data_norm"));
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = region.lo + region.length() * rng.uniform(i);
  return out;
}

double lr_norm_data(std::span<const double> f_values, std::span<const double> g_values, double r,
                    double region_length) {
  check_norm_order(r, "lr_norm_data");
  return std::pow(region_length * power_mean(f_values, g_values, r), 1.0 / r);
}

double lr_norm_data(const std::function<double(double)>& f, const std::function<double(double)>& g, double r,
                    Interval region, std::size_t count, std::uint64_t seed) {
  check_norm_order(r, "lr_norm_data");
  const std::vector<double> xs = uniform_points(region, count, seed);
  std::vector<double> fv(count), gv(count);
  for (std::size_t i = 0; i < count; ++i) {
    fv[i] = f(xs[i]);
    gv[i] = g(xs[i]);
  }
  return lr_norm_data(fv, gv, r, region.length());
}

double lr_norm_data(const Density& f, const Density& g, double r, Interval region, std::size_t count,
                    std::uint64_t seed) {
  check_norm_order(r, "lr_norm_data");
  const std::vector<double> xs = uniform_points(region, count, seed);
  return lr_norm_data(f.eval_many(xs), g.eval_many(xs), r, region.length());
}

double lp_norm_param(std::span<const double> f_values, std::span<const double> g_values, double p) {
  check_norm_order(p, "lp_norm_param");
  return std::pow(power_mean(f_values, g_values, p), 1.0 / p);
}

double lp_norm_param(const ParamFunction& f, const ParamFunction& g, double p, const SampleSet& samples) {
  check_norm_order(p, "lp_norm_param");
  std::vector<double> fv(samples.size()), gv(samples.size());
  parallel_for(samples.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      fv[i] = f(samples.point(i));
      gv[i] = g(samples.point(i));
    }
  });
  return lp_norm_param(fv, gv, p);
}

double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_statistic: no samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

// ---------------------------------------------------------------- tables

std::string BoundTable::to_csv() const {
  std::string out = "m\\n";
  for (unsigned n : orders) out += "," + std::to_string(n);
  out += "\n";
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    out += std::to_string(sizes[s]);
    for (std::size_t o = 0; o < orders.size(); ++o) out += "," + format_number(at(s, o));
    out += "\n";
  }
  return out;
}

nlohmann::json BoundTable::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t o = 0; o < orders.size(); ++o) row.push_back(at(s, o));
    rows.push_back(row);
  }
  return {{"quantity", quantity}, {"sizes", sizes}, {"orders", orders}, {"values", rows}};
}

nlohmann::json ErrorCurve::to_json() const {
  return {{"name", name},       {"space", space},   {"norm_order", norm_order}, {"region", region},
          {"samples", samples}, {"seed", seed},     {"orders", orders},         {"values", values}};
}

std::string curves_to_csv(std::span<const ErrorCurve> curves) {
  std::string out = "r\\n";
  if (curves.empty()) return out + "\n";
  for (unsigned n : curves.front().orders) out += "," + std::to_string(n);
  out += "\n";
  for (const auto& c : curves) {
    if (c.orders != curves.front().orders) throw std::invalid_argument("curves_to_csv: curves differ in orders");
    out += format_number(c.norm_order);
    for (double v : c.values) out += "," + format_number(v);
    out += "\n";
  }
  return out;
}

}  // namespace uqdc
