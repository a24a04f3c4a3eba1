#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fsrm/common.hpp"

namespace fsrm {

// Daily estimated (or synthetic) Hurst exponents. Degenerate days are kept
// in place as NaN gap markers, never interpolated.
struct RegularitySeries {
  std::vector<double> values;
  int window = 0;   // nu used by the estimator; 0 for exogenous series
  long origin = 0;  // day index of values[0]

  std::size_t valid_count() const;
};

// Largest admissible estimator window for a day of `obs_per_day` samples such
// that both second-difference sums stay inside the day.
int day_window(int obs_per_day);

// Ratio-of-quadratic-variations local Hurst estimator at anchor index t:
//   H = 1/2 log2(Mprime/M)
// where M averages squared second differences x[t-i]-2x[t-1-i]+x[t-2-i],
// i = 0..nu-1, and Mprime averages the lag-2 second differences
// x[t-2i]-2x[t-2i-2]+x[t-2i-4], i = 0..floor((nu-1)/2). Both are true means
// over their exact term counts.
double local_hurst(std::span<const double> x, int nu, std::size_t t);

// One estimate per complete day, each from that day's samples only.
RegularitySeries hurst_series(const SamplePath& log_prices, int obs_per_day);

struct FouEstimate {
  double hurst_hat = 0.0;
  double eta_hat = 0.0;
  double lambda_hat = 0.0;
  std::size_t sample_size = 0;
};

// Whole-series fOU parameter estimators on a unit-spaced series:
//   H   = 1/2 log2(Mprime/M)
//   eta = sqrt(sum |ddY|^2 / (R (4 - 4^H)))
//   lambda = ( Var(Y) / (eta^2 H Gamma(2H)) )^(-1/(2H))
// Gap values are skipped; stencils crossing a gap are dropped.
FouEstimate estimate_fou(const RegularitySeries& y);
FouEstimate estimate_fou(std::span<const double> y);

struct SeriesStats {
  double mean = 0.0;
  double stddev = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;  // raw kurtosis, ~3 for Gaussian
};

SeriesStats descriptive_stats(std::span<const double> values);

struct EstimateReport {
  FouEstimate estimate;
  // 95% moving-block bootstrap intervals for (hurst, eta, lambda).
  std::array<std::pair<double, double>, 3> ci95{};
  std::size_t bootstrap_successes = 0;
  std::size_t bootstrap_total = 0;
  SeriesStats hurst_stats;
};

EstimateReport estimate_with_ci(const RegularitySeries& y, std::uint64_t seed,
                                std::size_t n_boot = 400);

}  // namespace fsrm
