#include "fsrm/info.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fsrm/analytics.hpp"

namespace fsrm {

namespace {

// x log2 x with the limit value at 0.
double xlog2x(double x) {
  if (x <= 0.0) return 0.0;
  if (x > 1.0) x = 1.0;
  return x * std::log2(x);
}

double rho_for_conditioning(double hurst, double mlambda, double tol) {
  double rho = fou_autocorrelation(hurst, mlambda, tol);
  // Legitimate near-degenerate conditioning (tiny m*lambda) is clamped just
  // inside the open interval; anything beyond the sanity band has already
  // been rejected by fou_autocorrelation.
  const double cap = 1.0 - 1e-12;
  return std::clamp(rho, -cap, cap);
}

}  // namespace

double normalize_hurst(double h) {
  if (!std::isfinite(h)) throw ConfigError("normalize_hurst: input must be finite");
  return 0.5 + std::atan(h - 0.5) / M_PI;
}

double denormalize_hurst(double h_tilde) {
  if (!(h_tilde > 0.0 && h_tilde < 1.0))
    throw ConfigError("denormalize_hurst: input must lie in (0,1)");
  return 0.5 + std::tan(M_PI * (h_tilde - 0.5));
}

BinarySeries binarize_regularity(std::span<const double> series, double threshold,
                                 double source_lag) {
  if (series.empty()) throw DataError("binarize_regularity: empty series");
  BinarySeries out;
  out.source_lag = source_lag;
  out.symbols.reserve(series.size());
  for (double v : series) out.symbols.push_back(v > threshold ? 1 : 0);
  return out;
}

void WordDistribution::validate() const {
  if (word_length < 1) throw ConfigError("WordDistribution: word_length must be >= 1");
  if (probs.size() != (std::size_t{1} << word_length))
    throw ConfigError("WordDistribution: probs must have 2^L entries");
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw ConfigError("WordDistribution: negative probability");
    sum += p;
  }
  if (std::fabs(sum - 1.0) > 1e-12)
    throw ConfigError("WordDistribution: probabilities must sum to 1");
}

WordDistribution word_distribution(const BinarySeries& b, int word_length) {
  if (word_length < 1) throw ConfigError("word_distribution: word length must be >= 1");
  const std::size_t L = static_cast<std::size_t>(word_length);
  if (b.symbols.size() < L) throw DataError("word_distribution: series shorter than word");

  WordDistribution dist;
  dist.word_length = word_length;
  dist.probs.assign(std::size_t{1} << L, 0.0);

  const std::size_t n = b.symbols.size() - L + 1;
  const std::size_t mask = (std::size_t{1} << L) - 1;
  std::size_t w = 0;
  for (std::size_t i = 0; i < L; ++i) w = (w << 1) | b.symbols[i];
  dist.probs[w] += 1.0;
  for (std::size_t i = L; i < b.symbols.size(); ++i) {
    w = ((w << 1) | b.symbols[i]) & mask;
    dist.probs[w] += 1.0;
  }
  for (auto& p : dist.probs) p /= static_cast<double>(n);
  return dist;
}

double shannon_entropy(const WordDistribution& dist) {
  dist.validate();
  double e = 0.0;
  for (double p : dist.probs) e -= xlog2x(p);
  return e;
}

SerialInfoResult empirical_serial_information(const BinarySeries& b, int word_length) {
  if (word_length < 1)
    throw ConfigError("empirical_serial_information: word length must be >= 1");
  const std::size_t L = static_cast<std::size_t>(word_length);
  if (b.symbols.size() < L + 1)
    throw DataError("empirical_serial_information: series shorter than L+1");

  // Counts over (L+1)-windows; context in the high bits, next symbol in bit 0.
  std::vector<std::size_t> counts(std::size_t{1} << (L + 1), 0);
  const std::size_t n_words = b.symbols.size() - L;
  const std::size_t mask = (std::size_t{1} << (L + 1)) - 1;
  std::size_t w = 0;
  for (std::size_t i = 0; i < L; ++i) w = (w << 1) | b.symbols[i];
  for (std::size_t i = L; i < b.symbols.size(); ++i) {
    w = ((w << 1) | b.symbols[i]) & mask;
    counts[w] += 1;
  }

  // Conditional entropy E(next | context): contexts never observed carry
  // plug-in weight zero and contribute nothing.
  double cond_entropy = 0.0;
  const double total = static_cast<double>(n_words);
  for (std::size_t ctx = 0; ctx < (std::size_t{1} << L); ++ctx) {
    const double c0 = static_cast<double>(counts[ctx << 1]);
    const double c1 = static_cast<double>(counts[(ctx << 1) | 1]);
    const double c = c0 + c1;
    if (c == 0.0) continue;
    const double h = -(xlog2x(c0 / c) + xlog2x(c1 / c));
    cond_entropy += (c / total) * h;
  }

  SerialInfoResult res;
  res.info = std::clamp(1.0 - cond_entropy, 0.0, 1.0);
  res.word_length = word_length;
  res.n_words = n_words;
  return res;
}

double serial_info_from_correlation(double rho) {
  if (!(std::fabs(rho) <= 1.0))
    throw ConfigError("serial_info_from_correlation: rho must lie in [-1,1]");
  const double q = std::asin(rho) / M_PI;  // = atan(rho/sqrt(1-rho^2))/pi
  return 1.0 + xlog2x(0.5 - q) + xlog2x(0.5 + q);
}

double theoretical_serial_info(double hurst, double mlambda, double tol) {
  if (!(mlambda > 0.0)) throw ConfigError("theoretical_serial_info: mlambda must be > 0");
  return serial_info_from_correlation(fou_autocorrelation(hurst, mlambda, tol));
}

double conditional_prob_up(double x, const FouParams& params, double mlambda, double tol) {
  params.validate();
  if (!std::isfinite(x)) throw ConfigError("conditional_prob_up: x must be finite");
  if (!(mlambda > 0.0)) throw ConfigError("conditional_prob_up: mlambda must be > 0");

  const double rho = rho_for_conditioning(params.hurst, mlambda, tol);
  if (rho == 0.0) return 0.5;

  const double theta = std::sqrt(std::tgamma(2.0 * params.hurst + 1.0) / 2.0) * params.eta /
                       std::pow(params.lambda, params.hurst);
  const double z = rho * (x - 0.5) / (theta * std::sqrt(1.0 - rho * rho));
  const double p = normal_cdf(z);
  return std::clamp(p, std::numeric_limits<double>::min(),
                    1.0 - std::numeric_limits<double>::epsilon() / 2);
}

double conditional_prob_up_normalized(double x_tilde, const FouParams& params,
                                      double mlambda, double tol) {
  return conditional_prob_up(denormalize_hurst(x_tilde), params, mlambda, tol);
}

}  // namespace fsrm
