#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fsrm/common.hpp"
#include "fsrm/rng.hpp"

namespace fsrm {

// Synthetic intraday price model: daily regularity drawn from a fOU around
// `fou.mean`, each day's log-price increments generated as a tangent fBm
// segment with that day's exponent and scale `scale_c`.
struct FsrmConfig {
  FouParams fou;
  double scale_c = 1.0;
  int obs_per_day = 391;
  int days = 250;
  std::uint64_t seed = 0;
  std::size_t max_samples = 200'000'000;  // memory cap on obs_per_day * days

  void validate() const;
};

struct FsrmPaths {
  SamplePath log_prices;            // length days * obs_per_day, dt = 1/obs_per_day
  std::vector<double> true_hurst;   // exponent actually used for each day
};

// Theoretical fGn autocovariance at integer lag k for step dt and scale C:
//   gamma(k) = C^2 dt^(2H) (|k+1|^(2H) - 2|k|^(2H) + |k-1|^(2H)) / 2.
double fgn_autocovariance(double hurst, double dt, double scale_c, std::size_t lag);

// n zero-mean Gaussian increments with exact fGn covariance.
// Circulant-embedding synthesis; falls back to exact sequential
// (Levinson) synthesis when the embedding is not nonnegative-definite.
std::vector<double> gen_fgn(double hurst, std::size_t n, double dt, double scale_c,
                            std::uint64_t seed);

// fBm path of n samples starting at 0; increments are exactly gen_fgn(n-1).
SamplePath gen_fbm(double hurst, std::size_t n, double dt, double scale_c,
                   std::uint64_t seed);

std::size_t default_burn_in(double lambda, double dt);

// Stationary fOU approximation: exponential-Euler recursion on a driving fBm,
// started at the mean, with burn_in steps discarded.
SamplePath gen_fou(const FouParams& params, std::size_t n, double dt, std::uint64_t seed,
                   std::optional<std::size_t> burn_in = std::nullopt);

FsrmPaths gen_fsrm_prices(const FsrmConfig& cfg);

namespace detail {

// Exact stationary Gaussian sequence via Durbin-Levinson, O(n^2).
std::vector<double> durbin_levinson_path(const std::vector<double>& gamma, std::size_t n,
                                         Rng& rng);

}  // namespace detail

}  // namespace fsrm
