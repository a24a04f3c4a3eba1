#pragma once

#include <vector>

#include "fsrm/common.hpp"

namespace fsrm {

// Normalized autocorrelation of the stationary fOU on a grid of s*lambda values.
struct CorrelationCurve {
  std::vector<double> product_grid;  // s*lambda, strictly increasing, > 0 allowed to start at 0
  std::vector<double> rho;
  double hurst = 0.5;
};

struct LagMinResult {
  double s_star = 0.0;
  double rho_min = 1.0;
};

// Stationary variance eta^2 Gamma(2H+1) / (2 lambda^(2H)).
double fou_variance(const FouParams& params);

// rho(s*lambda; H) = (2 sin(pi H)/pi) * int_0^inf cos(slambda x) x^(1-2H)/(1+x^2) dx.
// Adaptive Gauss-Kronrod on cosine half-period panels with epsilon-accelerated
// alternating tail; exact power-series evaluation in the non-oscillatory regime.
// Returns exactly 1 at slambda = 0. Throws NumericalError when the requested
// tolerance cannot be met.
double fou_autocorrelation(double hurst, double slambda, double tol = 1e-8);

// fou_variance(params) * fou_autocorrelation(params.hurst, params.lambda * s).
double fou_autocovariance(const FouParams& params, double s, double tol = 1e-8);

// Grid argmin of rho over [0, s_max] (lambda = 1 normalization, grid step
// `step`), refined by bisection on the numerical derivative.
LagMinResult min_autocorrelation(double hurst, double s_max, double step, double tol = 1e-8);

CorrelationCurve correlation_curve(double hurst, double slambda_min, double slambda_max,
                                   double step, double tol = 1e-8);

namespace detail {

// Reference evaluation through the entire-series identity
//   rho(a) = cosh(a) - a^(2H) * sum_j a^(2j) / Gamma(2j + 2H + 1)
// with the matched asymptotic expansion for large a. Long-double arithmetic;
// absolute error stays below ~1e-12 across H in (0,1), a >= 0.
long double autocorrelation_series(double hurst, double slambda);

}  // namespace detail

}  // namespace fsrm
