#include "uqdc/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uqdc/csv.hpp"
#include "uqdc/numeric.hpp"
#include "uqdc/parallel.hpp"
#include "uqdc/rng.hpp"

namespace uqdc {
namespace {

constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();
constexpr double kObservedTiny = 1e-8;

}  // namespace

UpdatedDensity::UpdatedDensity(std::shared_ptr<const Density> initial, std::shared_ptr<const Density> observed,
                               std::shared_ptr<const Density> pushforward, QoiMap map)
    : initial_(std::move(initial)),
      observed_(std::move(observed)),
      pushforward_(std::move(pushforward)),
      map_(std::move(map)) {
  if (!initial_ || !observed_ || !pushforward_) throw std::invalid_argument("UpdatedDensity: null density");
  if (initial_->dimension() != map_.dimension())
    throw std::invalid_argument("UpdatedDensity: initial density and map dimensions differ");
  if (observed_->dimension() != 1 || pushforward_->dimension() != 1)
    throw std::invalid_argument("UpdatedDensity: observed and push-forward densities must be 1-D");
}

std::optional<double> UpdatedDensity::ratio_at_output(double q) const {
  const double den = pushforward_->eval(q);
  if (!(den >= kRatioFloor)) return std::nullopt;
  return observed_->eval(q) / den;
}

std::optional<double> UpdatedDensity::ratio(std::span<const double> lambda) const {
  return ratio_at_output(map_(lambda));
}

std::optional<double> UpdatedDensity::ratio(double lambda) const {
  return ratio(std::span<const double>(&lambda, 1));
}

std::optional<double> UpdatedDensity::updated(std::span<const double> lambda) const {
  const double prior = initial_->eval(lambda);
  if (prior == 0.0) return 0.0;
  const auto r = ratio(lambda);
  if (!r) return std::nullopt;
  return prior * *r;
}

std::optional<double> UpdatedDensity::updated(double lambda) const {
  return updated(std::span<const double>(&lambda, 1));
}

std::vector<double> UpdatedDensity::ratios_from_outputs(std::span<const double> outputs) const {
  std::vector<double> out(outputs.size());
  parallel_for(out.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto r = ratio_at_output(outputs[i]);
      out[i] = r ? *r : kUndefined;
    }
  });
  return out;
}

std::vector<double> UpdatedDensity::ratios(const SampleSet& samples) const {
  return ratios_from_outputs(evaluate_map(map_, samples));
}

// ------------------------------------------------------------- rejection

std::string RejectionResult::to_csv() const {
  std::string out = "proposal_index";
  for (std::size_t k = 0; k < dimension; ++k) out += dimension == 1 ? ",lambda" : ",lambda" + std::to_string(k + 1);
  out += "\n";
  for (std::size_t a = 0; a < accepted_indices.size(); ++a) {
    out += std::to_string(accepted_indices[a]);
    for (std::size_t k = 0; k < dimension; ++k) out += "," + format_number(accepted[a * dimension + k]);
    out += "\n";
  }
  return out;
}

void RejectionResult::write_csv(const std::filesystem::path& path) const { write_text_file(path, to_csv()); }

RejectionResult rejection_sample_ratios(std::span<const double> ratios, const SampleSet& proposals,
                                        std::uint64_t seed, std::uint64_t stream) {
  if (ratios.size() != proposals.size())
    throw std::invalid_argument("rejection_sample: one ratio per proposal required");
  double bound = 0.0;
  bool any = false;
  for (double r : ratios) {
    if (std::isnan(r)) continue;
    any = true;
    bound = std::max(bound, r);
  }
  if (!any) throw EmptyResultError("rejection_sample: every ratio is undefined");

  RejectionResult result;
  result.dimension = proposals.dimension;
  result.proposal_count = proposals.size();
  result.bound = bound;
  if (bound == 0.0) return result;

  const CounterRng rng(seed, stream);
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    const double r = ratios[i];
    if (std::isnan(r)) continue;
    if (rng.uniform(i) < r / bound) {
      result.accepted_indices.push_back(i);
      const auto p = proposals.point(i);
      result.accepted.insert(result.accepted.end(), p.begin(), p.end());
    }
  }
  return result;
}

RejectionResult rejection_sample(const UpdatedDensity& u, const SampleSet& proposals, std::uint64_t seed,
                                 std::uint64_t stream) {
  return rejection_sample_ratios(u.ratios(proposals), proposals, seed, stream);
}

RejectionResult rejection_sample(const UpdatedDensity& u, const SampleSet& proposals, std::uint64_t seed) {
  return rejection_sample(u, proposals, seed, derive_stream("rejection"));
}

// ------------------------------------------------------------ diagnostics

double expected_ratio(std::span<const double> ratios) {
  if (ratios.empty()) return 0.0;
  CompensatedSum s;
  for (double r : ratios) s.add(std::isnan(r) ? 0.0 : r);
  return s.value() / static_cast<double>(ratios.size());
}

double expected_ratio(const UpdatedDensity& u, const SampleSet& proposals) {
  return expected_ratio(u.ratios(proposals));
}

PredictabilityVerdict predictability_check(const Density& observed, const Density& pushforward,
                                           std::span<const double> probes) {
  PredictabilityVerdict verdict;
  if (probes.empty()) return verdict;
  std::size_t violations = 0;
  for (double q : probes) {
    const double obs = observed.eval(q);
    const double pf = pushforward.eval(q);
    verdict.constant = std::max(verdict.constant, obs / std::max(pf, kRatioFloor));
    if (pf < kRatioFloor && obs > kObservedTiny) ++violations;
  }
  verdict.violation_fraction = static_cast<double>(violations) / static_cast<double>(probes.size());
  return verdict;
}

std::vector<double> predictability_probes(double mean, double std, std::size_t count) {
  if (count < 2) throw std::invalid_argument("predictability_probes: need at least two probes");
  std::vector<double> out(count);
  const double lo = mean - 4.0 * std;
  const double step = 8.0 * std / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo + step * static_cast<double>(i);
  return out;
}

}  // namespace uqdc
