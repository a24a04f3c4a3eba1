#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace fsrm::detail {

std::size_t next_pow2(std::size_t n);

// In-place iterative radix-2 FFT; size must be a power of two.
// inverse = true applies the conjugate transform and the 1/n factor.
void fft_inplace(std::vector<std::complex<double>>& a, bool inverse);

}  // namespace fsrm::detail
