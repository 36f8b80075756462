#pragma once

#include <complex>
#include <span>

namespace pfrac::detail {

/// Unnormalized in-place complex DFT of an n^dim row-major array.
/// sign = -1 computes sum_j x_j e^{-2 pi i jk/n}; sign = +1 the inverse sum.
void fft_inplace(std::span<std::complex<double>> data, int dim, int points, int sign);

}  // namespace pfrac::detail
