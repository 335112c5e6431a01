#include "uqdc/polychaos.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "uqdc/numeric.hpp"
#include "uqdc/parallel.hpp"

namespace uqdc {
namespace {

double factorial(unsigned n) noexcept {
  if (n > 170) return std::exp(std::lgamma(static_cast<double>(n) + 1.0));
  double f = 1.0;
  for (unsigned k = 2; k <= n; ++k) f *= k;
  return f;
}

// psi_k = He_k / sqrt(k!), which stays representable for large orders.
void normalized_hermite(double x, unsigned n, double& psi_n, double& psi_nm1) noexcept {
  double prev = 0.0;
  double cur = 1.0;
  for (unsigned k = 0; k < n; ++k) {
    const double next = (x * cur - std::sqrt(static_cast<double>(k)) * prev) / std::sqrt(k + 1.0);
    prev = cur;
    cur = next;
  }
  psi_n = cur;
  psi_nm1 = prev;
}

unsigned total_degree(const PceSurrogate::Index& idx) noexcept { return idx[0] + idx[1]; }

bool canonical_less(const PceSurrogate::Term& a, const PceSurrogate::Term& b) noexcept {
  const unsigned da = total_degree(a.index);
  const unsigned db = total_degree(b.index);
  if (da != db) return da < db;
  return a.index[0] > b.index[0];
}

}  // namespace

double hermite_he(unsigned order, double x) noexcept {
  if (order == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (unsigned k = 1; k < order; ++k) {
    const double next = x * cur - k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

void hermite_he_table(double x, std::span<double> out) noexcept {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() > 1) out[1] = x;
  for (std::size_t k = 1; k + 1 < out.size(); ++k) out[k + 1] = x * out[k] - static_cast<double>(k) * out[k - 1];
}

QuadratureRule gauss_hermite(std::size_t npts) {
  if (npts < 1) throw std::invalid_argument("gauss_hermite: need at least one point");
  const auto n = static_cast<Eigen::Index>(npts);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(std::max<Eigen::Index>(n - 1, 0));
  for (Eigen::Index k = 0; k + 1 < n; ++k) sub[k] = std::sqrt(static_cast<double>(k + 1));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("gauss_hermite: eigensolver failed");

  QuadratureRule rule;
  rule.nodes.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  std::sort(rule.nodes.begin(), rule.nodes.end());
  rule.weights.resize(npts);

  const auto order = static_cast<unsigned>(npts);
  for (std::size_t i = 0; i < npts; ++i) {
    double x = rule.nodes[i];
    for (int it = 0; it < 4; ++it) {
      double psi_n = 0.0, psi_nm1 = 0.0;
      normalized_hermite(x, order, psi_n, psi_nm1);
      if (psi_nm1 == 0.0) break;
      x -= psi_n / (std::sqrt(static_cast<double>(order)) * psi_nm1);
    }
    double psi_n = 0.0, psi_nm1 = 0.0;
    normalized_hermite(x, order, psi_n, psi_nm1);
    rule.nodes[i] = x;
    rule.weights[i] = 1.0 / (static_cast<double>(order) * psi_nm1 * psi_nm1);
  }

  // The rule is symmetric about zero; enforce it exactly.
  for (std::size_t i = 0, j = npts - 1; i < j; ++i, --j) {
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = rule.weights[j] = w;
  }
  if (npts % 2 == 1) rule.nodes[npts / 2] = 0.0;

  CompensatedSum total;
  for (double w : rule.weights) total.add(w);
  const double norm = total.value();
  for (double& w : rule.weights) w /= norm;
  return rule;
}

double triple_product(unsigned i, unsigned j, unsigned k) noexcept {
  const unsigned sum = i + j + k;
  if (sum % 2 != 0) return 0.0;
  const unsigned s = sum / 2;
  if (s < i || s < j || s < k) return 0.0;
  return factorial(i) * factorial(j) * factorial(k) /
         (factorial(s - i) * factorial(s - j) * factorial(s - k));
}

TripleProductTensor::TripleProductTensor(unsigned max_order)
    : stride_(max_order + 1), entries_(static_cast<std::size_t>(stride_) * stride_ * stride_) {
  for (unsigned i = 0; i < stride_; ++i)
    for (unsigned j = 0; j < stride_; ++j)
      for (unsigned k = 0; k < stride_; ++k) entries_[(i * stride_ + j) * stride_ + k] = triple_product(i, j, k);
}

// ----------------------------------------------------------- PceSurrogate

PceSurrogate::PceSurrogate(std::size_t dimension, unsigned truncation,
                           std::vector<Standardization> standardization, std::vector<Term> terms)
    : dimension_(dimension),
      truncation_(truncation),
      standardization_(std::move(standardization)),
      terms_(std::move(terms)) {
  if (dimension_ != 1 && dimension_ != 2) throw std::invalid_argument("PceSurrogate: dimension must be 1 or 2");
  if (standardization_.size() != dimension_)
    throw std::invalid_argument("PceSurrogate: one standardization per dimension");
  for (const auto& s : standardization_) {
    if (!(s.std > 0.0) || !std::isfinite(s.mean) || !std::isfinite(s.std))
      throw std::invalid_argument("PceSurrogate: standardization needs finite mean and positive std");
  }
  for (const auto& t : terms_) {
    if (dimension_ == 1 && t.index[1] != 0) throw std::invalid_argument("PceSurrogate: 2-D index in a 1-D expansion");
    if (total_degree(t.index) > truncation_)
      throw std::invalid_argument("PceSurrogate: term above the truncation degree");
    if (!std::isfinite(t.value)) throw std::invalid_argument("PceSurrogate: non-finite coefficient");
  }
  std::sort(terms_.begin(), terms_.end(), canonical_less);
  for (std::size_t i = 1; i < terms_.size(); ++i) {
    if (terms_[i].index == terms_[i - 1].index) throw std::invalid_argument("PceSurrogate: duplicate index");
  }
}

double PceSurrogate::operator()(std::span<const double> lambda) const {
  if (lambda.size() != dimension_) {
    std::ostringstream msg;
    msg << "PceSurrogate: point of dimension " << lambda.size() << ", expected " << dimension_;
    throw std::invalid_argument(msg.str());
  }
  std::array<std::vector<double>, 2> basis;
  for (std::size_t k = 0; k < dimension_; ++k) {
    basis[k].resize(truncation_ + 1);
    const double z = (lambda[k] - standardization_[k].mean) / standardization_[k].std;
    hermite_he_table(z, basis[k]);
  }
  double sum = 0.0;
  for (const auto& t : terms_) {
    double phi = basis[0][t.index[0]];
    if (dimension_ == 2) phi *= basis[1][t.index[1]];
    sum += t.value * phi;
  }
  return sum;
}

double PceSurrogate::operator()(double lambda) const { return (*this)(std::span<const double>(&lambda, 1)); }

double PceSurrogate::coefficient(Index index) const noexcept {
  for (const auto& t : terms_) {
    if (t.index == index) return t.value;
  }
  return 0.0;
}

PceSurrogate PceSurrogate::truncated(unsigned n) const {
  std::vector<Term> kept;
  for (const auto& t : terms_) {
    if (total_degree(t.index) <= n) kept.push_back(t);
  }
  return PceSurrogate(dimension_, std::min(n, truncation_), standardization_, std::move(kept));
}

nlohmann::json PceSurrogate::to_json() const {
  nlohmann::json doc;
  doc["dimension"] = dimension_;
  doc["truncation"] = truncation_;
  doc["standardization"] = nlohmann::json::array();
  for (const auto& s : standardization_) doc["standardization"].push_back({{"mean", s.mean}, {"std", s.std}});
  doc["entries"] = nlohmann::json::array();
  for (const auto& t : terms_) {
    nlohmann::json index = nlohmann::json::array({t.index[0]});
    if (dimension_ == 2) index.push_back(t.index[1]);
    doc["entries"].push_back({{"index", index}, {"value", t.value}});
  }
  return doc;
}

PceSurrogate PceSurrogate::from_json(const nlohmann::json& doc) {
  const auto dimension = doc.at("dimension").get<std::size_t>();
  const auto truncation = doc.at("truncation").get<unsigned>();
  std::vector<Standardization> standardization;
  for (const auto& s : doc.at("standardization"))
    standardization.push_back({s.at("mean").get<double>(), s.at("std").get<double>()});
  std::vector<Term> terms;
  for (const auto& e : doc.at("entries")) {
    const auto& index = e.at("index");
    if (index.size() != dimension) throw std::invalid_argument("PceSurrogate::from_json: index length mismatch");
    Term t;
    t.index[0] = index[0].get<unsigned>();
    if (dimension == 2) t.index[1] = index[1].get<unsigned>();
    t.value = e.at("value").get<double>();
    terms.push_back(t);
  }
  return PceSurrogate(dimension, truncation, std::move(standardization), std::move(terms));
}

// ------------------------------------------------------ Galerkin ODE solve

PceSurrogate galerkin_ode_solve(unsigned truncation, double t_end, double dt) {
  if (truncation < 1) throw std::invalid_argument("galerkin_ode_solve: truncation must be at least 1");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw IntegrationError("galerkin_ode_solve: dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw IntegrationError("galerkin_ode_solve: bad end time");

  const unsigned n = truncation;
  const std::size_t size = n + 1;
  // Decay rate lambda = He_1(zeta): only lambda_1 = 1 is nonzero.
  const std::vector<double> rate{0.0, 1.0};
  const TripleProductTensor e(std::max<unsigned>(n, 1));

  std::vector<double> coupling(size * size, 0.0);
  for (unsigned k = 0; k <= n; ++k) {
    const double inv_norm = 1.0 / factorial(k);
    for (unsigned j = 0; j <= n; ++j) {
      double c = 0.0;
      for (unsigned i = 0; i < rate.size() && i <= n; ++i) c += rate[i] * e(i, j, k);
      coupling[k * size + j] = -inv_norm * c;
    }
  }
  const auto rhs = [&](const std::vector<double>& y, std::vector<double>& dy) {
    for (std::size_t k = 0; k < size; ++k) {
      double s = 0.0;
      for (std::size_t j = 0; j < size; ++j) s += coupling[k * size + j] * y[j];
      dy[k] = s;
    }
  };

  std::vector<double> y(size, 0.0);
  y[0] = 1.0;
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  if (steps > 0) {
    const double h = t_end / static_cast<double>(steps);
    std::vector<double> k1(size), k2(size), k3(size), k4(size), tmp(size);
    for (std::size_t step = 0; step < steps; ++step) {
      rhs(y, k1);
      for (std::size_t i = 0; i < size; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
      rhs(tmp, k2);
      for (std::size_t i = 0; i < size; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
      rhs(tmp, k3);
      for (std::size_t i = 0; i < size; ++i) tmp[i] = y[i] + h * k3[i];
      rhs(tmp, k4);
      for (std::size_t i = 0; i < size; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      for (double v : y) {
        if (!std::isfinite(v)) {
          std::ostringstream msg;
          msg << "galerkin_ode_solve: non-finite state at step " << step + 1;
          throw IntegrationError(msg.str());
        }
      }
    }
  }

  std::vector<PceSurrogate::Term> terms;
  for (unsigned i = 0; i <= n; ++i) terms.push_back({{i, 0}, y[i]});
  return PceSurrogate(1, n, {Standardization{}}, std::move(terms));
}

// ------------------------------------------------ pseudo-spectral projection

PceSurrogate pseudo_spectral_project(const QoiMap& map, unsigned truncation, std::size_t npts_per_dim,
                                     std::vector<Standardization> standardization) {
  const std::size_t dim = map.dimension();
  if (dim != 1 && dim != 2) throw std::invalid_argument("pseudo_spectral_project: map must be 1-D or 2-D");
  if (standardization.size() != dim)
    throw std::invalid_argument("pseudo_spectral_project: one standardization per dimension");
  if (npts_per_dim < static_cast<std::size_t>(truncation) + 1)
    throw std::invalid_argument("pseudo_spectral_project: need at least truncation + 1 points per dimension");

  const QuadratureRule rule = gauss_hermite(npts_per_dim);
  const std::size_t q = rule.size();
  const std::size_t grid = dim == 1 ? q : q * q;

  // Map values on the sorted tensor grid, row-major in (first, second).
  std::vector<double> values(grid);
  parallel_for(grid, [&](std::size_t begin, std::size_t end) {
    std::array<double, 2> lambda{};
    for (std::size_t g = begin; g < end; ++g) {
      const std::size_t a = dim == 1 ? g : g / q;
      const std::size_t b = dim == 1 ? 0 : g % q;
      lambda[0] = standardization[0].mean + standardization[0].std * rule.nodes[a];
      if (dim == 2) lambda[1] = standardization[1].mean + standardization[1].std * rule.nodes[b];
      const std::span<const double> point(lambda.data(), dim);
      double v = 0.0;
      try {
        v = map(point);
      } catch (const std::exception& ex) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "pseudo_spectral_project: map '" << map.name() << "' failed at node (" << lambda[0];
        if (dim == 2) msg << ", " << lambda[1];
        msg << "): " << ex.what();
        throw ProjectionError(msg.str());
      }
      if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "pseudo_spectral_project: map '" << map.name() << "' returned a non-finite value at node ("
            << lambda[0];
        if (dim == 2) msg << ", " << lambda[1];
        msg << ")";
        throw ProjectionError(msg.str());
      }
      values[g] = v;
    }
  }, 16);

  std::vector<double> he(q * (truncation + 1));
  for (std::size_t a = 0; a < q; ++a)
    hermite_he_table(rule.nodes[a], std::span<double>(he).subspan(a * (truncation + 1), truncation + 1));
  const auto basis = [&](std::size_t node, unsigned order) { return he[node * (truncation + 1) + order]; };

  std::vector<PceSurrogate::Term> terms;
  for (unsigned degree = 0; degree <= truncation; ++degree) {
    for (unsigned i = degree + 1; i-- > 0;) {
      const unsigned j = degree - i;
      if (dim == 1 && j != 0) continue;
      CompensatedSum acc;
      for (std::size_t g = 0; g < grid; ++g) {
        const std::size_t a = dim == 1 ? g : g / q;
        const std::size_t b = dim == 1 ? 0 : g % q;
        double w = rule.weights[a] * basis(a, i);
        if (dim == 2) w *= rule.weights[b] * basis(b, j);
        acc.add(w * values[g]);
      }
      terms.push_back({{i, j}, acc.value() / (factorial(i) * factorial(j))});
    }
  }
  return PceSurrogate(dim, truncation, std::move(standardization), std::move(terms));
}

namespace qoi {

QoiMap from(PceSurrogate surrogate, std::string name) {
  const std::size_t dim = surrogate.dimension();
  return QoiMap(std::move(name), dim,
                [s = std::move(surrogate)](std::span<const double> x) { return s(x); });
}

}  // namespace qoi
}  // namespace uqdc
