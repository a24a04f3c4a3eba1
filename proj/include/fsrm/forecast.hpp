#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fsrm/common.hpp"
#include "fsrm/estimators.hpp"

namespace fsrm {

// Ternary confidence state from the forecast probability and threshold beta:
// +1 above beta, -1 below 1-beta, 0 inside the abstention band. This is the
// sign of the paper-style band function whose raw values are {-2, 0, +2}.
int filter_state(double prob, double beta);

struct ForecastSignal {
  long day = 0;          // day index into the full daily series
  double prob_up = 0.5;  // P(next regularity above 1/2 | today's estimate)
  int state = 0;         // filter_state output
  int past_sign = 0;     // sign of the close-to-close increment ending at `day`
  int predicted_sign = 0;  // past_sign * state
};

struct ForecastResult {
  std::vector<ForecastSignal> signals;
  FouEstimate fou;    // parameters estimated on the first half
  double rho = 0.0;   // fOU autocorrelation at lag tau * lambda_hat
  int tau = 1;
  double beta = 0.5;
};

// Five-step pipeline on a daily regularity series plus daily log closes:
// estimate the fOU on the first half, apply the conditional probability to
// the second half, filter, and multiply by the past daily sign. Produces one
// signal per non-gap day i in [R/2, R-1-tau].
ForecastResult run_forecast(const RegularitySeries& hurst, std::span<const double> log_closes,
                            int tau, double beta, double tol = 1e-8);

// Convenience overload: derives the daily regularity series and closes
// (last intraday observation per day) from an intraday log-price path.
ForecastResult run_forecast(const SamplePath& intraday_log_prices, int obs_per_day, int tau,
                            double beta, double tol = 1e-8);

// Sign of the close-to-close increment over tau days; entry i corresponds to
// the increment from day i to day i+tau, defined for i <= n-1-tau.
std::vector<int> realized_signs(std::span<const double> log_closes, int tau);

struct HitRateResult {
  double rate = 0.0;
  std::size_t hits = 0;
  std::size_t n_active = 0;  // days with a nonzero prediction
};

// Hit rate over active days: the first n_active - tau of them enter the
// numerator and denominator. Zero realized increments count as misses.
HitRateResult hit_rate(std::span<const ForecastSignal> signals,
                       std::span<const int> realized, int tau);

// Exact one-sided binomial tail P(X >= hits), X ~ Binomial(n, 1/2).
double binomial_test(std::size_t hits, std::size_t n);

struct BdsResult {
  double statistic = 0.0;
  double pvalue = 1.0;
  int dim = 2;
  double epsilon = 0.0;
};

// BDS independence test; statistic asymptotically N(0,1) under i.i.d.,
// two-sided p-value. Radius is eps_factor * sample standard deviation.
BdsResult bds_test(std::span<const double> series, int dim = 3, double eps_factor = 1.0);

// Statistics for all embedding dimensions 2..dim.
std::vector<BdsResult> bds_statistics(std::span<const double> series, int dim = 3,
                                      double eps_factor = 1.0);

struct EvaluationReport {
  int tau = 1;
  double beta = 0.5;
  double hit_rate = std::numeric_limits<double>::quiet_NaN();
  std::size_t n_active = 0;
  double binom_pvalue = std::numeric_limits<double>::quiet_NaN();
  double bds_pvalue = std::numeric_limits<double>::quiet_NaN();
};

// One report per (tau, beta) cell; cells whose hit rate is undefined
// (no active days, or fewer than tau+1) keep NaN metrics.
std::vector<EvaluationReport> evaluate(const RegularitySeries& hurst,
                                       std::span<const double> log_closes,
                                       std::span<const int> taus,
                                       std::span<const double> betas,
                                       double eps_factor = 1.0, double tol = 1e-8);

std::vector<EvaluationReport> evaluate(const SamplePath& intraday_log_prices, int obs_per_day,
                                       std::span<const int> taus, std::span<const double> betas,
                                       double eps_factor = 1.0, double tol = 1e-8);

}  // namespace fsrm
