#include "oracles.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracle {

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 61>::integrate(f, a, b, 20, tol);
}

double gaussian_expectation(const std::function<double(double)>& f) {
  const double c = 1.0 / std::sqrt(2.0 * M_PI);
  return integrate([&](double x) { return f(x) * c * std::exp(-0.5 * x * x); }, -40.0, 40.0, 1e-14);
}

std::vector<double> hermite_power_coefficients(unsigned n) {
  // He_n(x) = n! sum_m (-1)^m x^(n-2m) / (m! (n-2m)! 2^m)
  std::vector<double> out(n + 1, 0.0);
  for (unsigned m = 0; 2 * m <= n; ++m) {
    const double v = std::tgamma(n + 1.0) / (std::tgamma(m + 1.0) * std::tgamma(n - 2.0 * m + 1.0) * std::ldexp(1.0, m));
    out[n - 2 * m] = (m % 2 == 0) ? v : -v;
  }
  return out;
}

double hermite_explicit(unsigned n, double x) {
  const auto c = hermite_power_coefficients(n);
  double s = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) s = s * x + c[k];
  return s;
}

double monomial_in_hermite(unsigned k, unsigned j) {
  if (j > k || (k - j) % 2 != 0) return 0.0;
  const unsigned h = (k - j) / 2;
  return std::tgamma(k + 1.0) / (std::tgamma(j + 1.0) * std::tgamma(h + 1.0) * std::ldexp(1.0, h));
}

double triple_product(unsigned i, unsigned j, unsigned k) {
  return gaussian_expectation(
      [&](double x) { return hermite_explicit(i, x) * hermite_explicit(j, x) * hermite_explicit(k, x); });
}

double exp_decay_coefficient(unsigned i, double t) {
  return gaussian_expectation([&](double x) { return std::exp(-t * x) * hermite_explicit(i, x); }) /
         std::tgamma(i + 1.0);
}

double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

double gaussian_moment(unsigned k) {
  if (k % 2 == 1) return 0.0;
  double v = 1.0;
  for (unsigned j = k; j > 1; j -= 2) v *= j - 1;
  return v;
}

}  // namespace oracle
