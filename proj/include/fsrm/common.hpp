#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace fsrm {

// Error taxonomy maps onto CLI exit codes: config -> 2, data -> 3, numerical -> 4.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

// Uniformly sampled real-valued path (log-prices, fOU values, ...).
// Time of sample k is origin + k * dt, in days.
struct SamplePath {
  double dt = 1.0;
  double origin = 0.0;
  std::vector<double> values;

  void validate() const;
};

// Parameter bundle of a stationary fractional Ornstein-Uhlenbeck process
//   dY_t = -lambda (Y_t - mean) dt + eta dB^hurst_t.
struct FouParams {
  double hurst = 0.5;
  double eta = 1.0;
  double lambda = 1.0;
  double mean = 0.5;

  void validate() const;
};

inline int sgn(double x) { return (x > 0.0) - (x < 0.0); }

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

inline bool is_gap(double v) { return std::isnan(v); }

constexpr double kGapValue = std::numeric_limits<double>::quiet_NaN();

std::string format_double(double v);  // 17 significant digits, round-trip safe

}  // namespace fsrm
