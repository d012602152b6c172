#pragma once

#include "tfio/coeff.hpp"
#include "tfio/grid.hpp"
#include "tfio/weights.hpp"

namespace tfio {

// Short-time Fourier transform samples V_g f(x, xi) on a time grid x (on-grid
// translates of the signal grid) and a frequency grid xi (a sub-lattice of the
// dual grid). Row-major: time axes then frequency axes.
struct StftField {
    UniformGrid time_grid;
    UniformGrid freq_grid;
    std::vector<cplx> values;
    double window_norm = 0.0; // ||g||_2 of the analyzing window

    std::size_t time_count() const {
        std::size_t c = 1;
        for (int a = 0; a < time_grid.dim; ++a) c *= static_cast<std::size_t>(time_grid.points);
        return c;
    }
    std::size_t freq_count() const {
        std::size_t c = 1;
        for (int a = 0; a < freq_grid.dim; ++a) c *= static_cast<std::size_t>(freq_grid.points);
        return c;
    }
};

// V_g f(x,xi) = h^d sum_t f(t) conj(g(t-x)) e^{-2 pi i xi.t}, one FFT per time
// shift. Every x must be an on-grid translate; every xi must lie on the dual
// grid of the signal grid.
StftField stft(const SampledField& f, const SampledField& g, const UniformGrid& time_grid,
               const UniformGrid& freq_grid);

// Full-resolution convenience: time grid = signal grid, freq grid = its dual.
StftField stft(const SampledField& f, const SampledField& g);

// f(t) = ||g||^{-2} sum_{x,xi} F(x,xi) e^{2 pi i xi.t} g(t-x) dx dxi on the
// window's grid.
SampledField stft_invert(const StftField& F, const SampledField& g);

// Weighted mixed norm of an STFT: inner p over time with weight v(x,xi), outer
// q over frequency; Riemann cell measures, sups for infinite exponents.
double mixed_norm(const StftField& F, double p, double q, const WeightSpec* v = nullptr);

// Window-parameterized modulation norm: stft then mixed_norm.
double modulation_norm(const SampledField& f, const SampledField& g, double p, double q,
                       const WeightSpec* v = nullptr);

} // namespace tfio
