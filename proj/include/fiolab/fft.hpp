#pragma once

#include "fiolab/grid.hpp"

#include <span>

namespace fiolab {

enum class FftDirection { forward, backward };

// In-place centered DFT over the listed axes of a row-major array:
//   X[m] = sum_j x[j] exp(-+ 2 pi i (j - n/2)(m - n/2) / n)
// with the minus sign for `forward`. No normalization. Every transformed axis
// length must be even.
void centered_dft(std::span<cplx> data, std::span<const std::size_t> shape, std::span<const std::size_t> axes,
                  FftDirection direction);

// Convenience for a contiguous 1D block.
void centered_dft(std::span<cplx> data, FftDirection direction);

} // namespace fiolab
