#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "uqdc/maps.hpp"

namespace uqdc {

/// Failure while integrating the Galerkin system.
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failure evaluating the map at a quadrature node.
class ProjectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Probabilists' Hermite polynomial He_order(x), orthogonal under N(0, 1)
/// with E[He_i^2] = i!.
[[nodiscard]] double hermite_he(unsigned order, double x) noexcept;

/// He_0(x) .. He_{out.size()-1}(x).
void hermite_he_table(double x, std::span<double> out) noexcept;

/// Nodes and weights for expectations under the standard normal; weights sum to one.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const noexcept { return nodes.size(); }
};

/// Golub-Welsch on the Jacobi matrix with off-diagonals sqrt(k), followed by
/// Newton polishing of each node and the closed-form weight n!/(n He_{n-1})^2.
[[nodiscard]] QuadratureRule gauss_hermite(std::size_t npts);

/// E[He_i He_j He_k] under N(0, 1).
[[nodiscard]] double triple_product(unsigned i, unsigned j, unsigned k) noexcept;

/// Dense table of triple products for orders 0..max_order.
class TripleProductTensor {
 public:
  explicit TripleProductTensor(unsigned max_order);

  [[nodiscard]] double operator()(unsigned i, unsigned j, unsigned k) const noexcept {
    return entries_[(i * stride_ + j) * stride_ + k];
  }
  [[nodiscard]] unsigned max_order() const noexcept { return stride_ - 1; }

 private:
  unsigned stride_;
  std::vector<double> entries_;
};

/// Inputs enter the basis as (lambda - mean) / std.
struct Standardization {
  double mean = 0.0;
  double std = 1.0;
};

/// Total-degree truncated Hermite chaos expansion in one or two variables.
class PceSurrogate {
 public:
  using Index = std::array<unsigned, 2>;  // second entry is 0 in 1-D

  struct Term {
    Index index{};
    double value = 0.0;
  };

  PceSurrogate(std::size_t dimension, unsigned truncation, std::vector<Standardization> standardization,
               std::vector<Term> terms);

  [[nodiscard]] double operator()(std::span<const double> lambda) const;
  [[nodiscard]] double operator()(double lambda) const;

  /// Coefficient at index; zero when absent.
  [[nodiscard]] double coefficient(Index index) const noexcept;

  /// Drops every term of total degree above n.
  [[nodiscard]] PceSurrogate truncated(unsigned n) const;

  [[nodiscard]] std::size_t dimension() const noexcept { return dimension_; }
  [[nodiscard]] unsigned truncation() const noexcept { return truncation_; }
  [[nodiscard]] std::span<const Standardization> standardization() const noexcept { return standardization_; }
  [[nodiscard]] std::span<const Term> terms() const noexcept { return terms_; }

  [[nodiscard]] nlohmann::json to_json() const;
  [[nodiscard]] static PceSurrogate from_json(const nlohmann::json& doc);

 private:
  std::size_t dimension_;
  unsigned truncation_;
  std::vector<Standardization> standardization_;
  std::vector<Term> terms_;
};

/// Stochastic Galerkin solution of dy/dt = -lambda y, y(0) = 1, lambda ~ N(0, 1):
/// dy_k/dt = -(1/k!) sum_{i,j<=n} lambda_i e_ijk y_j with lambda_1 = 1, integrated
/// by classical RK4. Returns y_i(t_end) as a 1-D surrogate.
[[nodiscard]] PceSurrogate galerkin_ode_solve(unsigned truncation, double t_end, double dt = 1e-3);

/// Tensor Gauss-Hermite projection: q_ij = sum w Q(mu + sigma node) He_i He_j / (i! j!).
[[nodiscard]] PceSurrogate pseudo_spectral_project(const QoiMap& map, unsigned truncation,
                                                   std::size_t npts_per_dim,
                                                   std::vector<Standardization> standardization);

namespace qoi {
[[nodiscard]] QoiMap from(PceSurrogate surrogate, std::string name);
}

}  // namespace uqdc
