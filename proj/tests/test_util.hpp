#pragma once

#include <cmath>
#include <numeric>
#include <span>
#include <vector>

namespace testutil {

inline double mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double variance_known_mean(std::span<const double> v, double mu) {
  double s = 0.0;
  for (double x : v) s += (x - mu) * (x - mu);
  return s / static_cast<double>(v.size());
}

inline double sample_variance(std::span<const double> v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

// Sample autocovariance at a given lag (biased normalization by n).
inline double autocovariance(std::span<const double> v, std::size_t lag) {
  const double m = mean(v);
  double s = 0.0;
  for (std::size_t i = 0; i + lag < v.size(); ++i) s += (v[i] - m) * (v[i + lag] - m);
  return s / static_cast<double>(v.size());
}

inline double autocorrelation(std::span<const double> v, std::size_t lag) {
  return autocovariance(v, lag) / autocovariance(v, 0);
}

}  // namespace testutil
