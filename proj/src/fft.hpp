#pragma once

#include <complex>
#include <span>

#include "fracmap/torus_field.hpp"

namespace fracmap::detail {

enum class FftDirection { forward, backward };

/// Unnormalized in-place DFT of one scalar component laid out in site order.
void fft(const Grid& grid, std::span<std::complex<double>> data, FftDirection direction);

}  // namespace fracmap::detail
