#pragma once

#include "tfio/grid.hpp"

#include <set>

namespace tfio {

// Riemann-sum Fourier transform along all axes of the chosen blocks.
// sign -1 is the forward transform with kernel e^{-2 pi i y.xi}; each
// transformed axis picks up the factor h together with the phase corrections
// for the grid offset -R, so the result samples the continuous transform of
// the grid data. The grids of transformed blocks become their duals.
// sign +1 composed with sign -1 is the identity up to round-off.
SampledField dft(const SampledField& f, const std::set<int>& block_indices, int sign);

// Convenience: transform every block.
SampledField dft(const SampledField& f, int sign);

namespace detail {
// 1-D unnormalized FFT of length n on contiguous data, kernel e^{sign 2pi i jk/n}.
// Backed by cached FFTW plans; thread-safe.
void fft_raw(cplx* data, int n, int sign);
} // namespace detail

} // namespace tfio
