#pragma once

// Independent reference computations for the tests. Nothing here reuses the
// library's Hermite recurrence or Gauss-Hermite rule.

#include <functional>
#include <vector>

namespace oracle {

/// E[f(Z)], Z ~ N(0, 1), by adaptive Gauss-Kronrod on [-40, 40].
double gaussian_expectation(const std::function<double(double)>& f);

/// Adaptive Gauss-Kronrod integral over [a, b].
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12);

/// Power-basis coefficients of He_n: He_n(x) = sum_k out[k] x^k.
std::vector<double> hermite_power_coefficients(unsigned n);
double hermite_explicit(unsigned n, double x);

/// Coefficient of He_j in the expansion of x^k.
double monomial_in_hermite(unsigned k, unsigned j);

/// E[He_i He_j He_k] by quadrature of the explicit polynomials.
double triple_product(unsigned i, unsigned j, unsigned k);

/// E[exp(-t Z) He_i(Z)] / i!.
double exp_decay_coefficient(unsigned i, double t);

/// Central finite difference with step h.
double central_difference(const std::function<double(double)>& f, double x, double h);

/// E[Z^k] = (k-1)!! for even k, 0 for odd.
double gaussian_moment(unsigned k);

}  // namespace oracle
