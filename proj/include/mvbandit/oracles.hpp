#pragma once

// Reference computations used to check the library against independent
// routes: closed forms, direct summation, numerical quadrature.

#include <cstdint>
#include <span>

namespace mvbandit::oracle {

/// Erlang survival function e^{-bx} sum_{k < shape} (bx)^k / k!, for integer shape.
double erlang_ccdf(int shape, double rate, double x);

/// P(X >= x) for X ~ Gamma(shape, rate) by adaptive Gauss-Kronrod quadrature
/// of the density on [x, inf).
double gamma_ccdf_quadrature(double shape, double rate, double x);

/// Regularized incomplete beta I_y(a, b).
double beta_cdf(double a, double b, double y);

/// P(M <= k) for M ~ Binomial(trials, p), by direct summation of the pmf.
double binomial_cdf(std::uint64_t trials, double p, std::int64_t k);

/// Standard normal CDF.
double normal_cdf(double z);

/// Correctly rounded sum of the inputs (exact accumulation).
double exact_sum(std::span<const double> xs);

}  // namespace mvbandit::oracle
