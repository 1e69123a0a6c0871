#include "mvbandit/oracles.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <mpfr.h>

namespace mvbandit::oracle {

double erlang_ccdf(int shape, double rate, double x) {
  if (shape < 1) throw std::domain_error("erlang_ccdf: shape must be a positive integer");
  const double bx = rate * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < shape; ++k) {
    term *= bx / k;
    sum += term;
  }
  return std::exp(-bx) * sum;
}

double gamma_ccdf_quadrature(double shape, double rate, double x) {
  const double log_norm = shape * std::log(rate) - std::lgamma(shape);
  auto density = [&](double t) {
    if (t <= 0.0) return 0.0;
    return std::exp(log_norm + (shape - 1.0) * std::log(t) - rate * t);
  };
  double error = 0.0;
  const double tail = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      density, x, std::numeric_limits<double>::infinity(), 20, 1e-13, &error);
  return tail;
}

double beta_cdf(double a, double b, double y) { return boost::math::ibeta(a, b, y); }

double binomial_cdf(std::uint64_t trials, double p, std::int64_t k) {
  if (k < 0) return 0.0;
  double total = 0.0;
  const double n = static_cast<double>(trials);
  for (std::int64_t j = 0; j <= k && static_cast<std::uint64_t>(j) <= trials; ++j) {
    const double jj = static_cast<double>(j);
    const double log_choose = std::lgamma(n + 1.0) - std::lgamma(jj + 1.0) -
                              std::lgamma(n - jj + 1.0);
    const double log_pmf = log_choose + (j > 0 ? jj * std::log(p) : 0.0) +
                           (trials > static_cast<std::uint64_t>(j) ? (n - jj) * std::log1p(-p) : 0.0);
    total += std::exp(log_pmf);
  }
  return total;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double exact_sum(std::span<const double> xs) {
  std::vector<__mpfr_struct> values(xs.size());
  std::vector<mpfr_ptr> ptrs(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    ptrs[i] = &values[i];
    mpfr_init2(ptrs[i], 53);
    mpfr_set_d(ptrs[i], xs[i], MPFR_RNDN);
  }
  mpfr_t result;
  mpfr_init2(result, 53);
  mpfr_sum(result, ptrs.data(), static_cast<unsigned long>(ptrs.size()), MPFR_RNDN);
  const double out = mpfr_get_d(result, MPFR_RNDN);
  mpfr_clear(result);
  for (auto* p : ptrs) mpfr_clear(p);
  return out;
}

}  // namespace mvbandit::oracle
