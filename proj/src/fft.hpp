#pragma once

#include <complex>
#include <vector>

namespace ringscan::detail {

/// Unnormalized in-place DFT of row-major 2D data; `sign` is the exponent sign
/// (+1 or -1). Plans are cached per (rows, cols, sign); not thread-safe.
void dft2d_inplace(std::vector<std::complex<double>>& data, int rows, int cols, int sign);

/// Unnormalized in-place 1D DFT; plans cached per (n, sign).
void dft1d_inplace(std::vector<std::complex<double>>& data, int sign);

/// Reorder a centred grid (zero bin at rows/2, cols/2) into DFT order (zero
/// bin at index 0) and back. The two are inverses for any rows/cols.
std::vector<std::complex<double>> to_dft_order(const std::vector<std::complex<double>>& in,
                                               int rows, int cols);
std::vector<std::complex<double>> from_dft_order(const std::vector<std::complex<double>>& in,
                                                 int rows, int cols);

}  // namespace ringscan::detail
