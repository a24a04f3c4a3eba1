#include "fsrm/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "fsrm/rng.hpp"

namespace fsrm {

namespace {

// Number of lag-2 second-difference terms in the half-window sum.
inline std::size_t mprime_count(int nu) {
  return static_cast<std::size_t>((nu - 1) / 2) + 1;
}

double percentile(std::vector<double>& sorted, double q) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

std::size_t RegularitySeries::valid_count() const {
  std::size_t n = 0;
  for (double v : values)
    if (!is_gap(v)) ++n;
  return n;
}

int day_window(int obs_per_day) {
  const int t = obs_per_day - 1;  // anchor at the day's last sample
  for (int nu = obs_per_day - 2; nu >= 4; --nu) {
    const int deepest_m = t - nu - 1;
    const int deepest_mp = t - 2 * static_cast<int>(mprime_count(nu) - 1) - 4;
    if (deepest_m >= 0 && deepest_mp >= 0) return nu;
  }
  return 0;
}

double local_hurst(std::span<const double> x, int nu, std::size_t t) {
  if (nu < 4) throw ConfigError("local_hurst: nu must be >= 4");
  if (t >= x.size()) throw ConfigError("local_hurst: anchor index out of range");
  const std::size_t k2 = mprime_count(nu);
  if (t < static_cast<std::size_t>(nu + 1) || t < 2 * (k2 - 1) + 4)
    throw ConfigError("local_hurst: window exceeds available history");

  double m = 0.0;
  for (int i = 0; i < nu; ++i) {
    const double d = x[t - i] - 2.0 * x[t - 1 - i] + x[t - 2 - i];
    m += d * d;
  }
  m /= static_cast<double>(nu);

  double mp = 0.0;
  for (std::size_t i = 0; i < k2; ++i) {
    const double d = x[t - 2 * i] - 2.0 * x[t - 2 * i - 2] + x[t - 2 * i - 4];
    mp += d * d;
  }
  mp /= static_cast<double>(k2);

  if (!std::isfinite(m) || !std::isfinite(mp))
    throw DataError("local_hurst: non-finite data in window");
  if (m == 0.0 || mp == 0.0) throw DataError("local_hurst: degenerate window");
  return 0.5 * std::log2(mp / m);
}

RegularitySeries hurst_series(const SamplePath& log_prices, int obs_per_day) {
  log_prices.validate();
  if (obs_per_day < 4) throw ConfigError("hurst_series: obs_per_day must be >= 4");
  const int nu = day_window(obs_per_day);
  if (nu < 4)
    throw DataError("hurst_series: obs_per_day too small for the estimator window");
  const std::size_t r = static_cast<std::size_t>(obs_per_day);
  const std::size_t days = log_prices.values.size() / r;
  if (days < 2) throw DataError("hurst_series: need at least two complete days");

  RegularitySeries out;
  out.window = nu;
  out.values.reserve(days);
  std::span<const double> x(log_prices.values);
  for (std::size_t d = 0; d < days; ++d) {
    // Anchor at the day's last sample; the window never reaches the previous
    // day, so consecutive estimates share no input samples.
    const std::size_t t = d * r + r - 1;
    const std::span<const double> day = x.subspan(d * r, r);
    try {
      out.values.push_back(local_hurst(day, nu, t - d * r));
    } catch (const DataError&) {
      out.values.push_back(kGapValue);  // degenerate day kept as a gap marker
    }
  }
  return out;
}

FouEstimate estimate_fou(std::span<const double> y) {
  const std::size_t n = y.size();
  std::size_t n_valid = 0;
  for (double v : y)
    if (!is_gap(v)) ++n_valid;
  if (n_valid < 10) throw DataError("estimate_fou: need at least 10 valid samples");

  // Whole-series M and M' over every stencil that avoids gaps; M' keeps the
  // end-anchored stride-2 structure of the windowed estimator.
  double m = 0.0, sum_dd = 0.0;
  std::size_t n1 = 0;
  for (std::size_t j = 2; j < n; ++j) {
    if (is_gap(y[j]) || is_gap(y[j - 1]) || is_gap(y[j - 2])) continue;
    const double d = y[j] - 2.0 * y[j - 1] + y[j - 2];
    sum_dd += d * d;
    ++n1;
  }
  if (n1 == 0) throw DataError("estimate_fou: no usable second differences");
  m = sum_dd / static_cast<double>(n1);

  double mp = 0.0;
  std::size_t n2 = 0;
  const std::size_t t = n - 1;
  for (std::size_t i = 0; 2 * i + 4 <= t; ++i) {
    const std::size_t a = t - 2 * i, b = t - 2 * i - 2, c = t - 2 * i - 4;
    if (is_gap(y[a]) || is_gap(y[b]) || is_gap(y[c])) continue;
    const double d = y[a] - 2.0 * y[b] + y[c];
    mp += d * d;
    ++n2;
  }
  if (n2 == 0) throw DataError("estimate_fou: no usable lag-2 second differences");
  mp /= static_cast<double>(n2);

  if (m == 0.0 || mp == 0.0) throw DataError("estimate_fou: degenerate series");
  const double hurst_hat = 0.5 * std::log2(mp / m);
  if (!(hurst_hat < 1.0))
    throw NumericalError("estimate_fou: hurst estimate >= 1, 4-4^H nonpositive");
  if (!(hurst_hat > -0.5))
    throw NumericalError("estimate_fou: hurst estimate <= -1/2, out of estimable range");

  const double denom = 4.0 - std::pow(4.0, hurst_hat);
  const double eta2 = sum_dd / (static_cast<double>(n1 + 2) * denom);
  const double eta_hat = std::sqrt(eta2);

  double mean = 0.0;
  for (double v : y)
    if (!is_gap(v)) mean += v;
  mean /= static_cast<double>(n_valid);
  double var = 0.0;
  for (double v : y)
    if (!is_gap(v)) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n_valid);
  if (!(var > 0.0)) throw DataError("estimate_fou: zero sample variance");

  // lambda = (Var / (eta^2 Gamma(2H+1)/2))^(-1/(2H)), evaluated in logs;
  // H Gamma(2H) = Gamma(2H+1)/2 stays finite down to H > -1/2.
  const double log_ratio =
      std::log(var) - std::log(eta2) - std::lgamma(2.0 * hurst_hat + 1.0) + std::log(2.0);
  const double log_lambda = -log_ratio / (2.0 * hurst_hat);
  if (!(std::fabs(log_lambda) < 700.0))
    throw NumericalError("estimate_fou: lambda estimate not representable");

  FouEstimate est;
  est.hurst_hat = hurst_hat;
  est.eta_hat = eta_hat;
  est.lambda_hat = std::exp(log_lambda);
  est.sample_size = n_valid;
  if (!(est.eta_hat > 0.0) || !(est.lambda_hat > 0.0))
    throw NumericalError("estimate_fou: nonpositive eta or lambda estimate");
  return est;
}

FouEstimate estimate_fou(const RegularitySeries& y) {
  return estimate_fou(std::span<const double>(y.values));
}

SeriesStats descriptive_stats(std::span<const double> values) {
  std::vector<double> v;
  v.reserve(values.size());
  for (double x : values)
    if (!is_gap(x)) v.push_back(x);
  if (v.size() < 2) throw DataError("descriptive_stats: need at least 2 valid values");

  SeriesStats s;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : v) {
    const double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  const double n = static_cast<double>(v.size());
  m2 /= n;
  m3 /= n;
  m4 /= n;
  s.mean = mean;
  s.stddev = std::sqrt(m2 * n / (n - 1.0));
  s.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  s.kurtosis = m2 > 0.0 ? m4 / (m2 * m2) : 0.0;
  return s;
}

EstimateReport estimate_with_ci(const RegularitySeries& y, std::uint64_t seed,
                                std::size_t n_boot) {
  EstimateReport report;
  report.estimate = estimate_fou(y);
  report.hurst_stats = descriptive_stats(y.values);
  report.bootstrap_total = n_boot;

  const std::size_t n = y.values.size();
  const std::size_t block = std::max<std::size_t>(2, static_cast<std::size_t>(
                                                         std::ceil(std::cbrt(n))));
  Rng rng(seed);
  std::vector<double> hs, es, ls;
  std::vector<double> resampled(n);
  for (std::size_t b = 0; b < n_boot; ++b) {
    std::size_t pos = 0;
    while (pos < n) {
      const std::size_t start =
          static_cast<std::size_t>(rng.uniform() * static_cast<double>(n - block + 1));
      for (std::size_t j = 0; j < block && pos < n; ++j, ++pos)
        resampled[pos] = y.values[start + j];
    }
    try {
      const auto est = estimate_fou(resampled);
      hs.push_back(est.hurst_hat);
      es.push_back(est.eta_hat);
      ls.push_back(est.lambda_hat);
    } catch (const Error&) {
      // Resample fell outside the estimable range; skipped.
    }
  }
  report.bootstrap_successes = hs.size();
  std::sort(hs.begin(), hs.end());
  std::sort(es.begin(), es.end());
  std::sort(ls.begin(), ls.end());
  report.ci95[0] = {percentile(hs, 0.025), percentile(hs, 0.975)};
  report.ci95[1] = {percentile(es, 0.025), percentile(es, 0.975)};
  report.ci95[2] = {percentile(ls, 0.025), percentile(ls, 0.975)};
  return report;
}

}  // namespace fsrm
