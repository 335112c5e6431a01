#include "uqdc/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "uqdc/csv.hpp"
#include "uqdc/numeric.hpp"
#include "uqdc/polychaos.hpp"
#include "uqdc/rng.hpp"

namespace uqdc {
namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

template <class F>
auto stage(const std::string& name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& ex) {
    throw StageError(name, ex.what());
  }
}

std::string order_label(unsigned n) { return "n=" + std::to_string(n); }

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// ---------------------------------------------------------------- config

std::vector<NormSpec> default_norms() {
  std::vector<NormSpec> norms;
  for (int r = 1; r <= 5; ++r) norms.push_back({"data", static_cast<double>(r)});
  norms.push_back({"param", 2.0});
  return norms;
}

template <class T>
T read(const json& doc, const char* key) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& ex) {
    throw ConfigError(std::string("config key '") + key + "': " + ex.what());
  }
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::ode: return "ode";
    case ExperimentKind::pde: return "pde";
    case ExperimentKind::singular: return "singular";
  }
  return "unknown";
}

ExperimentKind parse_experiment(const std::string& name) {
  if (name == "ode") return ExperimentKind::ode;
  if (name == "pde") return ExperimentKind::pde;
  if (name == "singular") return ExperimentKind::singular;
  throw ConfigError("unknown experiment '" + name + "' (expected ode, pde or singular)");
}

ExperimentConfig ExperimentConfig::defaults(ExperimentKind kind) {
  ExperimentConfig c;
  c.experiment = kind;
  c.norms = default_norms();
  switch (kind) {
    case ExperimentKind::ode:
      c.orders = {1, 2, 3, 4, 5};
      c.observed_mean = 1.0;
      c.region = {0.0, 4.0};
      break;
    case ExperimentKind::pde:
      c.orders = {1, 2, 3, 4, 5};
      c.observed_mean = 0.3;
      c.region = {-1.0, 1.0};
      break;
    case ExperimentKind::singular:
      c.orders = {1, 2, 4, 8, 16};
      c.observed_mean = 0.5;
      c.region = {-1.0, 1.0};
      break;
  }
  c.output_dir = "out/" + to_string(kind);
  return c;
}

void ExperimentConfig::validate() const {
  if (m < 100) throw ConfigError("m must be at least 100");
  if (orders.empty()) throw ConfigError("orders must not be empty");
  for (std::size_t i = 0; i < orders.size(); ++i) {
    if (orders[i] < 1) throw ConfigError("orders must be at least 1");
    if (i > 0 && orders[i] <= orders[i - 1]) throw ConfigError("orders must be sorted ascending without repeats");
  }
  if (replicates < 1) throw ConfigError("replicates must be at least 1");
  if (!(observed_std > 0.0) || !std::isfinite(observed_std) || !std::isfinite(observed_mean))
    throw ConfigError("observed density needs a finite mean and positive std");
  for (const auto& n : norms) {
    if (n.space != "data" && n.space != "param") throw ConfigError("norm space must be 'data' or 'param'");
    if (!(n.order >= 1.0) || !std::isfinite(n.order)) throw ConfigError("norm order must be at least 1");
  }
  for (std::size_t i = 0; i < table_sizes.size(); ++i) {
    if (table_sizes[i] < 2) throw ConfigError("table sizes must be at least 2");
    if (i > 0 && table_sizes[i] <= table_sizes[i - 1]) throw ConfigError("table sizes must be sorted ascending");
  }
  if (norm_points < 1) throw ConfigError("norm_points must be positive");
  if (!(region.hi > region.lo) || !std::isfinite(region.lo) || !std::isfinite(region.hi))
    throw ConfigError("region must be a bounded interval with lo < hi");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
  if (experiment == ExperimentKind::pde && quadrature_points < orders.back() + 1)
    throw ConfigError("quadrature_points must be at least the largest order plus one");
  if (!(consistency_gate > 0.0)) throw ConfigError("consistency gate must be positive");
  if (min_accepted < 1) throw ConfigError("min_accepted must be positive");
}

ExperimentConfig ExperimentConfig::from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known = {
      "experiment", "m", "orders", "seed", "observed", "norms", "output_dir", "replicates", "table_sizes",
      "norm_points", "region", "dt", "quadrature_points", "lipschitz_probes", "consistency", "export_ensembles"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.contains(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  if (!doc.contains("experiment")) throw ConfigError("config key 'experiment' is required");
  ExperimentConfig c = defaults(parse_experiment(read<std::string>(doc, "experiment")));

  if (doc.contains("m")) c.m = read<std::size_t>(doc, "m");
  if (doc.contains("orders")) c.orders = read<std::vector<unsigned>>(doc, "orders");
  if (doc.contains("seed")) c.seed = read<std::uint64_t>(doc, "seed");
  if (doc.contains("observed")) {
    const json& obs = doc.at("observed");
    if (!obs.is_object()) throw ConfigError("observed must be an object");
    const auto family = obs.contains("family") ? read<std::string>(obs, "family") : std::string("normal");
    if (family != "normal") throw ConfigError("observed family must be 'normal'");
    c.observed_mean = read<double>(obs, "mean");
    c.observed_std = read<double>(obs, "std");
  }
  if (doc.contains("norms")) {
    c.norms.clear();
    const json& norms = doc.at("norms");
    if (!norms.is_array()) throw ConfigError("norms must be an array");
    for (const auto& n : norms) c.norms.push_back({read<std::string>(n, "space"), read<double>(n, "order")});
  }
  if (doc.contains("output_dir")) c.output_dir = read<std::string>(doc, "output_dir");
  if (doc.contains("replicates")) c.replicates = read<std::size_t>(doc, "replicates");
  if (doc.contains("table_sizes")) c.table_sizes = read<std::vector<std::size_t>>(doc, "table_sizes");
  if (doc.contains("norm_points")) c.norm_points = read<std::size_t>(doc, "norm_points");
  if (doc.contains("region")) {
    const auto r = read<std::vector<double>>(doc, "region");
    if (r.size() != 2) throw ConfigError("region must be [lo, hi]");
    c.region = {r[0], r[1]};
  }
  if (doc.contains("dt")) c.dt = read<double>(doc, "dt");
  if (doc.contains("quadrature_points")) c.quadrature_points = read<std::size_t>(doc, "quadrature_points");
  if (doc.contains("lipschitz_probes")) {
    const auto p = read<std::string>(doc, "lipschitz_probes");
    if (p == "centers") {
      c.lipschitz_probes = ProbeSet::centers;
    } else if (p == "dense_grid") {
      c.lipschitz_probes = ProbeSet::dense_grid;
    } else {
      throw ConfigError("lipschitz_probes must be 'centers' or 'dense_grid'");
    }
  }
  if (doc.contains("consistency")) {
    const json& k = doc.at("consistency");
    if (k.is_boolean()) {
      c.consistency = k.get<bool>();
    } else if (k.is_object()) {
      if (k.contains("enabled")) c.consistency = read<bool>(k, "enabled");
      if (k.contains("gate")) c.consistency_gate = read<double>(k, "gate");
      if (k.contains("min_accepted")) c.min_accepted = read<std::size_t>(k, "min_accepted");
    } else {
      throw ConfigError("consistency must be a boolean or an object");
    }
  }
  if (doc.contains("export_ensembles")) c.export_ensembles = read<bool>(doc, "export_ensembles");
  c.validate();
  return c;
}

json ExperimentConfig::to_json() const {
  json norms_doc = json::array();
  for (const auto& n : norms) norms_doc.push_back({{"space", n.space}, {"order", n.order}});
  return {{"experiment", to_string(experiment)},
          {"m", m},
          {"orders", orders},
          {"seed", seed},
          {"observed", {{"family", "normal"}, {"mean", observed_mean}, {"std", observed_std}}},
          {"norms", norms_doc},
          {"output_dir", output_dir.generic_string()},
          {"replicates", replicates},
          {"table_sizes", table_sizes},
          {"norm_points", norm_points},
          {"region", {region.lo, region.hi}},
          {"dt", dt},
          {"quadrature_points", quadrature_points},
          {"lipschitz_probes", lipschitz_probes == ProbeSet::centers ? "centers" : "dense_grid"},
          {"consistency", {{"enabled", consistency}, {"gate", consistency_gate}, {"min_accepted", min_accepted}}},
          {"export_ensembles", export_ensembles}};
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& ex) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + ex.what());
  }
  return ExperimentConfig::from_json(doc);
}

AnalyticDensity initial_density(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::ode: return AnalyticDensity::normal(0.0, 1.0);
    case ExperimentKind::pde: return AnalyticDensity::normal({0.0, 0.0}, {0.1, 0.1});
    case ExperimentKind::singular: return AnalyticDensity::uniform(-1.0, 1.0);
  }
  throw ConfigError("unknown experiment");
}

QoiMap exact_map(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::ode: return qoi::ode();
    case ExperimentKind::pde: return qoi::pde();
    case ExperimentKind::singular: return qoi::quintic();
  }
  throw ConfigError("unknown experiment");
}

std::vector<QoiMap> build_surrogates(const ExperimentConfig& config, json* record) {
  std::vector<QoiMap> maps;
  json entries = json::array();
  switch (config.experiment) {
    case ExperimentKind::ode:
      for (unsigned n : config.orders) {
        auto s = stage("surrogate " + order_label(n), [&] { return galerkin_ode_solve(n, 0.5, config.dt); });
        entries.push_back({{"order", n}, {"expansion", s.to_json()}});
        maps.push_back(qoi::from(std::move(s), "galerkin " + order_label(n)));
      }
      break;
    case ExperimentKind::pde: {
      const auto full = stage("surrogate projection", [&] {
        return pseudo_spectral_project(qoi::pde(), config.orders.back(), config.quadrature_points,
                                       {Standardization{0.0, 0.1}, Standardization{0.0, 0.1}});
      });
      for (unsigned n : config.orders) {
        auto s = full.truncated(n);
        entries.push_back({{"order", n}, {"expansion", s.to_json()}});
        maps.push_back(qoi::from(std::move(s), "projection " + order_label(n)));
      }
      break;
    }
    case ExperimentKind::singular:
      for (unsigned n : config.orders) {
        auto s = stage("surrogate " + order_label(n), [&] { return pwl_surrogate(n); });
        entries.push_back({{"order", n},
                           {"knots", std::vector<double>(s.knots().begin(), s.knots().end())},
                           {"values", std::vector<double>(s.values().begin(), s.values().end())}});
        maps.push_back(qoi::from(std::move(s), "interpolant " + order_label(n)));
      }
      break;
  }
  if (record) *record = std::move(entries);
  return maps;
}

// ------------------------------------------------------------ replicates

namespace {

struct Context {
  const ExperimentConfig& config;
  std::shared_ptr<const AnalyticDensity> initial;
  std::shared_ptr<const AnalyticDensity> observed;
  QoiMap exact;
  std::vector<QoiMap> maps;
  std::vector<std::shared_ptr<const Density>> exact_pf;  // singular: simple functions per order
};

std::vector<double> updated_values(std::span<const double> prior, std::span<const double> ratios) {
  std::vector<double> out(prior.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::isnan(ratios[i]) ? 0.0 : prior[i] * ratios[i];
  return out;
}

std::string region_text(Interval r) { return "[" + format_number(r.lo) + ", " + format_number(r.hi) + "]"; }

ConsistencyResult consistency_check(const Context& ctx, std::size_t index, const PushforwardEnsemble& ens,
                                    double expected, std::uint64_t seed) {
  const unsigned n = ctx.config.orders[index];
  ConsistencyResult out;
  out.order = n;
  out.expected_ratio = expected;
  out.gated = expected >= ctx.config.consistency_gate;
  if (!out.gated) return out;

  const UpdatedDensity u(ctx.initial, ctx.observed, ens.shared_kde(), ctx.maps[index]);
  const std::size_t target = ctx.config.min_accepted;
  const std::size_t cap = std::max(kMaxConsistencyProposals, 4 * target);
  std::size_t count = 4 * target;
  for (int attempt = 0; attempt < 8; ++attempt) {
    const SampleSet proposals = draw_initial(*ctx.initial, count, seed, derive_stream("proposals", n));
    const RejectionResult rej = rejection_sample(u, proposals, seed, derive_stream("rejection", n));
    out.accepted = rej.accepted_count();
    out.proposals = rej.proposal_count;
    out.bound = rej.bound;
    // When the ratio has a heavy upper tail, M grows with the proposal count and
    // the rate keeps falling, so the budget is capped and a shortfall is reported.
    if (rej.accepted_count() >= target || count >= cap) {
      out.reached_target = rej.accepted_count() >= target;
      SampleSet acc;
      acc.dimension = rej.dimension;
      acc.points = rej.accepted;
      const std::vector<double> q = evaluate_map(ctx.maps[index], acc);
      out.ks = ks_statistic(q, [&](double x) { return ctx.observed->cdf(x); });
      return out;
    }
    const double rate = std::max(rej.acceptance_rate(), 1e-6);
    count = std::min(cap, static_cast<std::size_t>(std::ceil(1.25 * static_cast<double>(target) / rate)));
  }
  return out;
}

ReplicateResult run_replicate(const Context& ctx, std::uint64_t seed, std::vector<ConsistencyResult>* consistency,
                              std::string* profiles) {
  const auto start = Clock::now();
  const ExperimentConfig& cfg = ctx.config;
  const std::size_t orders = cfg.orders.size();
  ReplicateResult res;
  res.seed = seed;

  std::size_t total = cfg.m;
  for (std::size_t s : cfg.table_sizes) total = std::max(total, s);
  const SampleSet all = stage("initial samples", [&] { return draw_initial(*ctx.initial, total, seed); });
  const auto base = std::make_shared<const SampleSet>(all.prefix(cfg.m));

  const PushforwardEnsemble exact =
      stage("push-forward exact", [&] { return build_pushforward(ctx.exact, base, "exact"); });
  std::vector<PushforwardEnsemble> ens;
  for (std::size_t i = 0; i < orders; ++i) {
    const std::string label = order_label(cfg.orders[i]);
    ens.push_back(stage("push-forward " + label, [&] { return build_pushforward(ctx.maps[i], base, label); }));
    res.bandwidths.push_back(ens.back().kde().bandwidth()[0]);
  }
  res.bandwidth_exact = exact.kde().bandwidth()[0];

  if (cfg.export_ensembles) {
    exact.write_csv(cfg.output_dir / "ensembles" / ("seed" + std::to_string(seed) + "_exact.csv"));
    for (std::size_t i = 0; i < orders; ++i)
      ens[i].write_csv(cfg.output_dir / "ensembles" /
                       ("seed" + std::to_string(seed) + "_n" + std::to_string(cfg.orders[i]) + ".csv"));
  }

  // B and L tables.
  res.bounds = {"B", cfg.table_sizes, cfg.orders, std::vector<double>(cfg.table_sizes.size() * orders)};
  res.lipschitz = {"L", cfg.table_sizes, cfg.orders, std::vector<double>(cfg.table_sizes.size() * orders)};
  for (std::size_t s = 0; s < cfg.table_sizes.size(); ++s) {
    const std::size_t size = cfg.table_sizes[s];
    std::shared_ptr<const SampleSet> subset = size == cfg.m ? base : std::make_shared<const SampleSet>(all.prefix(size));
    for (std::size_t i = 0; i < orders; ++i) {
      const std::string label = "tables m=" + std::to_string(size) + " " + order_label(cfg.orders[i]);
      stage(label, [&] {
        const PushforwardEnsemble local = size == cfg.m ? ens[i] : build_pushforward(ctx.maps[i], subset, label);
        res.bounds.at(s, i) = density_bound(local, cfg.lipschitz_probes);
        res.lipschitz.at(s, i) = lipschitz_estimate(local, cfg.lipschitz_probes);
        return 0;
      });
    }
  }

  // Ratios, expected ratios and updated densities on the shared samples.
  const std::vector<double> prior = ctx.initial->eval_many(base->points);
  const auto ratios_for = [&](const PushforwardEnsemble& e, const QoiMap& map) {
    const UpdatedDensity u(ctx.initial, ctx.observed, e.shared_kde(), map);
    return u.ratios_from_outputs(e.outputs());
  };
  const std::vector<double> exact_ratios = stage("ratios exact", [&] { return ratios_for(exact, ctx.exact); });
  res.expected_ratio_exact = expected_ratio(exact_ratios);
  const std::vector<double> exact_updated = updated_values(prior, exact_ratios);
  std::vector<std::vector<double>> updated(orders);
  for (std::size_t i = 0; i < orders; ++i) {
    const auto r = stage("ratios " + order_label(cfg.orders[i]), [&] { return ratios_for(ens[i], ctx.maps[i]); });
    res.expected_ratio.push_back(expected_ratio(r));
    updated[i] = updated_values(prior, r);
    if (!ctx.exact_pf.empty()) {
      const UpdatedDensity u(ctx.initial, ctx.observed, ctx.exact_pf[i], ctx.maps[i]);
      res.expected_ratio_exact_pf.push_back(expected_ratio(u.ratios_from_outputs(ens[i].outputs())));
    }
  }

  // Error curves.
  const std::vector<double> xs = uniform_points(cfg.region, cfg.norm_points, seed);
  const std::vector<double> exact_on_region = exact.kde().eval_many(xs);
  std::vector<std::vector<double>> on_region(orders);
  const std::vector<double> exact_composed = exact.composed_at_samples();
  std::vector<std::vector<double>> composed(orders);
  for (std::size_t i = 0; i < orders; ++i) {
    on_region[i] = ens[i].kde().eval_many(xs);
    composed[i] = ens[i].composed_at_samples();
  }
  for (const auto& norm : cfg.norms) {
    if (norm.space == "data") {
      ErrorCurve c{"pushforward", "data", norm.order, region_text(cfg.region), cfg.norm_points, seed, cfg.orders, {}};
      for (std::size_t i = 0; i < orders; ++i)
        c.values.push_back(lr_norm_data(exact_on_region, on_region[i], norm.order, cfg.region.length()));
      res.pushforward_error.push_back(std::move(c));
    } else {
      ErrorCurve c{"composed", "param", norm.order, "initial measure", cfg.m, seed, cfg.orders, {}};
      ErrorCurve u{"updated", "param", norm.order, "initial measure", cfg.m, seed, cfg.orders, {}};
      for (std::size_t i = 0; i < orders; ++i) {
        c.values.push_back(lp_norm_param(composed[i], exact_composed, norm.order));
        u.values.push_back(lp_norm_param(updated[i], exact_updated, norm.order));
      }
      res.composed_error.push_back(std::move(c));
      res.updated_error.push_back(std::move(u));
    }
  }

  // Predictability.
  const std::vector<double> probes = predictability_probes(cfg.observed_mean, cfg.observed_std);
  res.predictability_exact = predictability_check(*ctx.observed, exact.kde(), probes);
  for (std::size_t i = 0; i < orders; ++i)
    res.predictability.push_back(predictability_check(*ctx.observed, ens[i].kde(), probes));

  if (consistency && cfg.consistency) {
    for (std::size_t i = 0; i < orders; ++i) {
      consistency->push_back(stage("consistency " + order_label(cfg.orders[i]), [&] {
        return consistency_check(ctx, i, ens[i], res.expected_ratio[i], seed);
      }));
    }
  }

  if (profiles && cfg.experiment == ExperimentKind::singular) {
    const auto analytic = AnalyticDensity::quintic_pushforward();
    std::string csv = "q,analytic,kde_exact";
    for (unsigned n : cfg.orders) csv += ",simple_n" + std::to_string(n) + ",kde_n" + std::to_string(n);
    csv += "\n";
    constexpr int kGrid = 400;
    for (int k = 0; k < kGrid; ++k) {
      const double q = -1.0 + (k + 0.5) * (2.0 / kGrid);
      csv += format_number(q) + "," + format_number(analytic.eval(q)) + "," + format_number(exact.kde().eval(q));
      for (std::size_t i = 0; i < orders; ++i)
        csv += "," + format_number(ctx.exact_pf[i]->eval(q)) + "," + format_number(ens[i].kde().eval(q));
      csv += "\n";
    }
    *profiles = std::move(csv);
  }

  res.seconds = seconds_since(start);
  return res;
}

// Visits every stochastic cell in a fixed order.
template <class R, class F>
void visit_cells(R& r, F&& f) {
  for (auto& v : r.bounds.values) f(v);
  for (auto& v : r.lipschitz.values) f(v);
  for (auto& v : r.expected_ratio) f(v);
  f(r.expected_ratio_exact);
  for (auto& v : r.expected_ratio_exact_pf) f(v);
  for (auto* curves : {&r.pushforward_error, &r.composed_error, &r.updated_error})
    for (auto& c : *curves)
      for (auto& v : c.values) f(v);
  for (auto& p : r.predictability) {
    f(p.constant);
    f(p.violation_fraction);
  }
  f(r.predictability_exact.constant);
  f(r.predictability_exact.violation_fraction);
  for (auto& v : r.bandwidths) f(v);
  f(r.bandwidth_exact);
}

std::vector<double> flatten(const ReplicateResult& r) {
  std::vector<double> out;
  visit_cells(r, [&](const double& v) { out.push_back(v); });
  return out;
}

ReplicateResult aggregate(const std::vector<ReplicateResult>& reps, bool want_std) {
  ReplicateResult out = reps.front();
  out.seconds = 0.0;
  const std::size_t k = reps.size();
  std::vector<std::vector<double>> cells;
  cells.reserve(k);
  for (const auto& r : reps) cells.push_back(flatten(r));
  std::size_t pos = 0;
  visit_cells(out, [&](double& v) {
    CompensatedSum s;
    for (std::size_t j = 0; j < k; ++j) s.add(cells[j][pos]);
    const double mean = s.value() / static_cast<double>(k);
    if (!want_std) {
      v = mean;
    } else {
      CompensatedSum sq;
      for (std::size_t j = 0; j < k; ++j) sq.add((cells[j][pos] - mean) * (cells[j][pos] - mean));
      v = k > 1 ? std::sqrt(sq.value() / static_cast<double>(k - 1)) : 0.0;
    }
    ++pos;
  });
  for (auto* curves : {&out.pushforward_error, &out.composed_error, &out.updated_error})
    for (auto& c : *curves) c.seed = reps.front().seed;
  return out;
}

json replicate_json(const ReplicateResult& r) {
  json curves = json::object();
  const auto put = [&](const char* name, const std::vector<ErrorCurve>& cs) {
    json arr = json::array();
    for (const auto& c : cs) arr.push_back({{"norm_order", c.norm_order}, {"values", c.values}});
    curves[name] = arr;
  };
  put("pushforward", r.pushforward_error);
  put("composed", r.composed_error);
  put("updated", r.updated_error);
  json doc = {{"seed", r.seed},
              {"bounds", r.bounds.to_json()["values"]},
              {"lipschitz", r.lipschitz.to_json()["values"]},
              {"expected_ratio", r.expected_ratio},
              {"expected_ratio_exact", r.expected_ratio_exact},
              {"curves", curves}};
  if (!r.expected_ratio_exact_pf.empty()) doc["expected_ratio_exact_pushforward"] = r.expected_ratio_exact_pf;
  return doc;
}

json curves_json(const std::vector<ErrorCurve>& cs) {
  json arr = json::array();
  for (const auto& c : cs) arr.push_back(c.to_json());
  return arr;
}

json tables_json(const ReplicateResult& r, const std::vector<unsigned>& orders) {
  json er = {{"orders", orders}, {"values", r.expected_ratio}, {"exact_map", r.expected_ratio_exact}};
  if (!r.expected_ratio_exact_pf.empty()) er["exact_pushforward"] = r.expected_ratio_exact_pf;
  return {{"bounds", r.bounds.to_json()}, {"lipschitz", r.lipschitz.to_json()}, {"expected_ratio", er}};
}

json curves_block(const ReplicateResult& r) {
  return {{"pushforward", curves_json(r.pushforward_error)},
          {"composed", curves_json(r.composed_error)},
          {"updated", curves_json(r.updated_error)}};
}

std::string expected_ratio_csv(const std::vector<unsigned>& orders, std::size_t m, const std::vector<double>& values) {
  std::string out = "m\\n";
  for (unsigned n : orders) out += "," + std::to_string(n);
  out += "\n" + std::to_string(m);
  for (double v : values) out += "," + format_number(v);
  return out + "\n";
}

}  // namespace

json ExperimentReport::to_json() const {
  json doc;
  doc["config"] = config.to_json();
  doc["tables"] = tables_json(mean, config.orders);
  doc["curves"] = curves_block(mean);
  if (stddev) {
    doc["tables"]["std"] = tables_json(*stddev, config.orders);
    doc["curves"]["std"] = curves_block(*stddev);
  }

  json diag;
  json pred = json::array();
  for (std::size_t i = 0; i < config.orders.size(); ++i)
    pred.push_back({{"order", config.orders[i]},
                    {"constant", mean.predictability[i].constant},
                    {"violation_fraction", mean.predictability[i].violation_fraction}});
  diag["predictability"] = pred;
  diag["predictability_exact"] = {{"constant", mean.predictability_exact.constant},
                                  {"violation_fraction", mean.predictability_exact.violation_fraction}};
  json cons = json::array();
  for (const auto& c : consistency)
    cons.push_back({{"order", c.order},
                    {"expected_ratio", c.expected_ratio},
                    {"gated", c.gated},
                    {"ks", c.ks},
                    {"accepted", c.accepted},
                    {"proposals", c.proposals},
                    {"bound", c.bound},
                    {"reached_target", c.reached_target}});
  diag["consistency"] = cons;
  diag["bandwidth_rule"] = to_string(BandwidthRule::scott);
  diag["bandwidths"] = {{"orders", mean.bandwidths}, {"exact", mean.bandwidth_exact}};
  json reps = json::array();
  for (const auto& r : replicates) reps.push_back(replicate_json(r));
  diag["replicates"] = reps;
  doc["diagnostics"] = diag;

  json seeds = json::array();
  for (const auto& r : replicates) seeds.push_back(r.seed);
  doc["meta"] = {{"software", "uqdc"},
                 {"version", kSoftwareVersion},
                 {"rng", "philox4x32-10"},
                 {"seeds", seeds},
                 {"replicates", replicates.size()},
                 {"initial", initial_density(config.experiment).describe()},
                 {"surrogates", surrogates}};
  return doc;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto start = Clock::now();
  ExperimentReport report;
  report.config = config;

  Context ctx{config,
              std::make_shared<const AnalyticDensity>(initial_density(config.experiment)),
              std::make_shared<const AnalyticDensity>(AnalyticDensity::normal(config.observed_mean, config.observed_std)),
              exact_map(config.experiment),
              build_surrogates(config, &report.surrogates),
              {}};
  if (config.experiment == ExperimentKind::singular) {
    for (unsigned n : config.orders) {
      ctx.exact_pf.push_back(std::make_shared<const SimpleFunctionDensity>(
          stage("exact push-forward " + order_label(n), [&] { return pwl_pushforward_exact(pwl_surrogate(n)); })));
    }
  }

  for (std::size_t k = 0; k < config.replicates; ++k) {
    const std::uint64_t seed = replicate_seed(config.seed, k);
    report.replicates.push_back(run_replicate(ctx, seed, k == 0 ? &report.consistency : nullptr,
                                              k == 0 ? &report.profiles_csv : nullptr));
  }
  report.mean = aggregate(report.replicates, false);
  if (config.replicates > 1) report.stddev = aggregate(report.replicates, true);
  report.seconds = seconds_since(start);
  return report;
}

void emit_tables(const ExperimentReport& report, const std::filesystem::path& output_dir) {
  std::error_code ec;
  std::filesystem::create_directories(output_dir, ec);
  if (ec || !std::filesystem::is_directory(output_dir))
    throw std::runtime_error("output directory " + output_dir.string() + " is not writable");

  const auto& cfg = report.config;
  const auto write_set = [&](const ReplicateResult& r, const std::string& suffix) {
    write_text_file(output_dir / ("bounds" + suffix + ".csv"), r.bounds.to_csv());
    write_text_file(output_dir / ("lipschitz" + suffix + ".csv"), r.lipschitz.to_csv());
    write_text_file(output_dir / ("expected_ratio" + suffix + ".csv"),
                    expected_ratio_csv(cfg.orders, cfg.m, r.expected_ratio));
    if (!r.expected_ratio_exact_pf.empty())
      write_text_file(output_dir / ("expected_ratio_exact_pushforward" + suffix + ".csv"),
                      expected_ratio_csv(cfg.orders, cfg.m, r.expected_ratio_exact_pf));
    write_text_file(output_dir / ("pushforward_error" + suffix + ".csv"), curves_to_csv(r.pushforward_error));
    write_text_file(output_dir / ("composed_error" + suffix + ".csv"), curves_to_csv(r.composed_error));
    write_text_file(output_dir / ("updated_error" + suffix + ".csv"), curves_to_csv(r.updated_error));
  };
  write_set(report.mean, "");
  if (report.stddev) write_set(*report.stddev, "_std");
  if (!report.profiles_csv.empty()) write_text_file(output_dir / "profiles.csv", report.profiles_csv);
  write_text_file(output_dir / "report.json", report.to_json().dump(2) + "\n");

  json timing = {{"total_seconds", report.seconds}, {"replicate_seconds", json::array()}};
  for (const auto& r : report.replicates) timing["replicate_seconds"].push_back(r.seconds);
  write_text_file(output_dir / "timing.json", timing.dump(2) + "\n");
}

}  // namespace uqdc
