#pragma once

#include "tfio/coeff.hpp"
#include "tfio/fio.hpp"
#include "tfio/gabor.hpp"
#include "tfio/grid.hpp"

#include <functional>
#include <set>

// Serial reference implementations. Everything here recomputes results by the
// most literal route available (direct summation, naive recursion, dense
// solves) independently of the kernels it checks; the test suites and the
// benchmark compare against these.
namespace tfio::ref {

using PointFn = std::function<cplx(std::span<const double>)>;

// Riemann-sum Fourier transform by direct O(N^2)-per-axis summation.
SampledField dft_direct(const SampledField& f, const std::set<int>& blocks, int sign);

// V_g f(x, xi) for closed-form f, g by direct quadrature over [-R, R)^n with
// `points` nodes per axis (the refined-resolution oracle).
cplx stft_quadrature(const PointFn& f, const PointFn& g, std::span<const double> x,
                     std::span<const double> xi, int n_axes, int points, double half_width);

// naive nested loops, no parallelism, no blocking
SampledField bk_apply_loops(const KernelField& k, std::span<const SampledField> inputs);

// naive recursive evaluation of the iterated norm
double nested_norm_recursive(const CoefficientTensor& t, const NestedNormSpec& spec);

// dense frame matrix assembled atom by atom (independent of the separable
// assembly in the library), and the solves built on it
SampledField dual_window_dense(const GaborSystem& sys);
FrameBounds frame_bounds_eigen(const GaborSystem& sys);

// serial direct-summation operator application (benchmark partner of
// fio_apply's parallel path)
SampledField fio_apply_serial(const FioProblem& p, std::span<const SampledField> inputs);

// one Gabor-matrix entry by definition: operator on atoms, inner product
// against the test atom; entry = (m', n', m_1, n_1, .., m_r, n_r)
cplx gabor_matrix_entry(const KernelField& k, const GaborSystem& sys, std::span<const int> entry);

} // namespace tfio::ref
