#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fsrm/common.hpp"

namespace fsrm {

// Arctan squeeze of an unbounded regularity value into (0,1); fixes 1/2.
double normalize_hurst(double h);

// Inverse of normalize_hurst on (0,1).
double denormalize_hurst(double h_tilde);

// Binary regularity indicators, symbol 1 iff value exceeds the threshold
// (strict inequality; a value equal to the threshold maps to 0).
struct BinarySeries {
  std::vector<std::uint8_t> symbols;
  double source_lag = 1.0;  // time scale m of the binarization
};

BinarySeries binarize_regularity(std::span<const double> series, double threshold = 0.5,
                                 double source_lag = 1.0);

// Relative frequencies of the 2^L binary words of length L; probs[w] indexes
// the word by its bits, most recent symbol in the least significant bit.
struct WordDistribution {
  int word_length = 1;
  std::vector<double> probs;

  void validate() const;
};

WordDistribution word_distribution(const BinarySeries& b, int word_length);

// -sum p log2 p with 0 log 0 := 0, in bits.
double shannon_entropy(const WordDistribution& dist);

struct SerialInfoResult {
  double info = 0.0;      // bits, in [0,1]
  int word_length = 1;    // context length L
  std::size_t n_words = 0;  // number of (L+1)-windows used
};

// Plug-in estimate of 1 - E(X_{.+L} | X_.^L) from a binary series.
SerialInfoResult empirical_serial_information(const BinarySeries& b, int word_length);

// Closed-form serial information of a binarized stationary Gaussian sequence
// with autocorrelation rho: 1 + f(1/2 - asin(rho)/pi) + f(1/2 + asin(rho)/pi),
// f(x) = x log2 x.
double serial_info_from_correlation(double rho);

// Serial information of the binarized fOU at lag scale m, rho evaluated from
// the fOU autocorrelation at m*lambda.
double theoretical_serial_info(double hurst, double mlambda, double tol = 1e-8);

// P(Y_{t+m} > 1/2 | Y_t = x) for the stationary fOU with long-term mean 1/2:
//   N( rho (x - 1/2) / (theta sqrt(1 - rho^2)) ),  theta^2 = Var(Y).
double conditional_prob_up(double x, const FouParams& params, double mlambda,
                           double tol = 1e-8);

// Same probability conditioned on the arctan-normalized level x_tilde in (0,1).
double conditional_prob_up_normalized(double x_tilde, const FouParams& params,
                                      double mlambda, double tol = 1e-8);

}  // namespace fsrm
