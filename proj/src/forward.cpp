#include "uqdc/forward.hpp"

#include <cmath>
#include <sstream>

#include "uqdc/csv.hpp"
#include "uqdc/parallel.hpp"
#include "uqdc/rng.hpp"

namespace uqdc {

SampleSet SampleSet::prefix(std::size_t count) const {
  if (count > size()) throw std::out_of_range("SampleSet::prefix: count exceeds size");
  SampleSet out = *this;
  out.points.resize(count * dimension);
  return out;
}

SampleSet draw_initial(const AnalyticDensity& dist, std::size_t m, std::uint64_t seed, std::uint64_t stream) {
  if (m == 0) throw std::invalid_argument("draw_initial: sample count must be positive");
  if (dist.family() == AnalyticDensity::Family::quintic_pushforward)
    throw UnsupportedInputError("draw_initial: only normal and uniform initial densities can be sampled");

  SampleSet set;
  set.dimension = dist.dimension();
  set.seed = seed;
  set.stream = stream;
  set.source = dist.describe();
  set.points.resize(m * set.dimension);

  const CounterRng rng(seed, stream);
  const std::size_t d = set.dimension;
  const auto first = dist.first();
  const auto second = dist.second();
  const bool normal = dist.family() == AnalyticDensity::Family::normal;
  parallel_for(m, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t k = 0; k < d; ++k) {
        const std::uint64_t index = i * d + k;
        set.points[index] = normal ? first[k] + second[k] * rng.normal(index)
                                   : first[k] + (second[k] - first[k]) * rng.uniform(index);
      }
    }
  });
  return set;
}

SampleSet draw_initial(const AnalyticDensity& dist, std::size_t m, std::uint64_t seed) {
  return draw_initial(dist, m, seed, derive_stream("initial"));
}

std::vector<double> evaluate_map(const QoiMap& map, const SampleSet& samples) {
  if (map.dimension() != samples.dimension) {
    std::ostringstream msg;
    msg << "map '" << map.name() << "' has dimension " << map.dimension() << " but samples have dimension "
        << samples.dimension;
    throw std::invalid_argument(msg.str());
  }
  std::vector<double> out(samples.size());
  parallel_for(out.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      double q = 0.0;
      try {
        q = map(samples.point(i));
      } catch (const std::exception& ex) {
        throw MapEvaluationError(i, "map '" + map.name() + "' failed at sample " + std::to_string(i) + ": " +
                                        ex.what());
      }
      if (!std::isfinite(q))
        throw MapEvaluationError(i, "map '" + map.name() + "' returned a non-finite value at sample " +
                                        std::to_string(i));
      out[i] = q;
    }
  });
  return out;
}

PushforwardEnsemble::PushforwardEnsemble(std::string label, std::shared_ptr<const SampleSet> samples, QoiMap map,
                                         std::vector<double> outputs, std::shared_ptr<const KdeDensity> kde)
    : label_(std::move(label)),
      samples_(std::move(samples)),
      map_(std::move(map)),
      outputs_(std::move(outputs)),
      kde_(std::move(kde)) {
  if (!samples_ || !kde_) throw std::invalid_argument("PushforwardEnsemble: samples and kde are required");
  if (outputs_.size() != samples_->size())
    throw std::invalid_argument("PushforwardEnsemble: one output per sample required");
}

double PushforwardEnsemble::eval_composed(std::span<const double> lambda) const { return kde_->eval(map_(lambda)); }

double PushforwardEnsemble::eval_composed(double lambda) const {
  return eval_composed(std::span<const double>(&lambda, 1));
}

std::vector<double> PushforwardEnsemble::composed_at_samples() const { return kde_->eval_many(outputs_); }

std::string PushforwardEnsemble::to_csv() const {
  std::string out = "sample_index";
  const std::size_t d = samples_->dimension;
  for (std::size_t k = 0; k < d; ++k) out += d == 1 ? ",lambda" : ",lambda" + std::to_string(k + 1);
  out += ",q\n";
  for (std::size_t i = 0; i < outputs_.size(); ++i) {
    out += std::to_string(i);
    for (double v : samples_->point(i)) out += "," + format_number(v);
    out += "," + format_number(outputs_[i]) + "\n";
  }
  return out;
}

void PushforwardEnsemble::write_csv(const std::filesystem::path& path) const { write_text_file(path, to_csv()); }

PushforwardEnsemble build_pushforward(const QoiMap& map, std::shared_ptr<const SampleSet> samples, std::string label,
                                      BandwidthRule rule) {
  if (!samples) throw std::invalid_argument("build_pushforward: null sample set");
  std::vector<double> outputs = evaluate_map(map, *samples);
  auto kde = std::make_shared<const KdeDensity>(KdeDensity::fit(outputs, 1, rule));
  if (label.empty()) label = map.name();
  return PushforwardEnsemble(std::move(label), std::move(samples), map, std::move(outputs), std::move(kde));
}

}  // namespace uqdc
