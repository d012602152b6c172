#pragma once

#include "tfio/coeff.hpp"
#include "tfio/grid.hpp"

#include <cstdint>
#include <stdexcept>

namespace tfio {

struct FrameError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Gabor system on the lattice alpha Z^d x beta Z^d, truncated to
// |m| <= m_range, |n| <= n_range per axis. alpha must be an integer multiple
// of the grid spacing and beta of the dual spacing, so every atom is an
// on-grid time-frequency shift of the window.
struct GaborSystem {
    SampledField window; // single block, dimension d
    double alpha = 0.5;
    double beta = 0.5;
    int m_range = 8;
    int n_range = 8;
    int time_step = 1; // alpha / h
    int freq_step = 1; // beta * 2R

    GaborSystem(SampledField g, double a, double b, int mr, int nr);

    const UniformGrid& grid() const { return window.blocks[0]; }
    int dim() const { return grid().dim; }
    std::size_t lattice_count() const;
};

// M_{beta n} T_{alpha m} g
SampledField gabor_atom(const GaborSystem& sys, std::span<const int> m, std::span<const int> n);

// coefficient operator: c_{m,n} = <f, g_{m,n}>
CoefficientTensor analyze(const GaborSystem& sys, const SampledField& f);

// synthesis: sum_{m,n} c_{m,n} g_{m,n}
SampledField synthesize(const GaborSystem& sys, const CoefficientTensor& c);

// S f = synthesize(analyze(f))
SampledField frame_operator(const GaborSystem& sys, const SampledField& f);

struct FrameBounds {
    double lower = 0.0;
    double upper = 0.0;
    double ratio() const { return lower > 0 ? upper / lower : INFINITY; }
};

// extremal eigenvalues of the assembled frame matrix (exact at this truncation)
FrameBounds frame_bounds_dense(const GaborSystem& sys);

// Rayleigh-quotient envelope over seeded random signals; sandwiched by the
// dense bounds.
FrameBounds frame_bounds_rayleigh(const GaborSystem& sys, int trials, std::uint64_t seed);

// Infinite-lattice bound estimate for integer-density systems (alpha beta = 1,
// d = 1), where the frame operator acts as multiplication by |Zg|^2 in the
// Zak domain: extremes of |Zg|^2 over sampled (x, omega), including the
// symmetry point where the critical Gaussian vanishes. The truncated dense
// bounds approach these only as the grid widens.
FrameBounds frame_bounds_zak(const GaborSystem& sys, int omega_samples = 64);

// gamma with S gamma = g by conjugate gradients; throws FrameError on
// non-convergence (the usual sign that the truncated system is not a frame).
SampledField dual_window(const GaborSystem& sys, double tol, int max_iter);

// system with window S^{-1/2} g, scaled so synthesize(analyze(f)) = f at this
// truncation; throws FrameError when the lower frame bound vanishes.
GaborSystem tighten(const GaborSystem& sys);

} // namespace tfio
