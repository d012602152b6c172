#pragma once

#include "tfio/fio.hpp"
#include "tfio/gabor.hpp"
#include "tfio/stft.hpp"

#include <array>
#include <cstdint>
#include <functional>

namespace tfio {

struct FitResult {
    double slope = 0;
    double intercept = 0;
    double residual = 0;
};

// least squares on (log distance, log magnitude); magnitudes below 1e-14 are
// round-off floor and excluded. Needs at least 3 usable samples.
FitResult fit_decay_exponent(std::span<const std::pair<double, double>> samples);

struct StftRelationReport {
    double max_deviation = 0; // max | |V_G K| - |V_Hcheck sigma0 . A| |
    double max_snap = 0;      // worst nearest-node snap distance
    int sample_count = 0;
    std::uint64_t seed = 0;
};

// Compares the kernel-side STFT against the symbol-side STFT composed with
// the phase-space map, at seeded on-grid sample points.
StftRelationReport verify_kernel_symbol_stft(const FioProblem& p, const SampledField& window,
                                             int sample_count, std::uint64_t seed);

struct BoundednessRow {
    std::vector<double> p, q; // per input
    double s1 = 1, s2 = 1;    // target exponents
    std::string weight_id;
    std::string family;
    int trials = 0;
    double max_ratio_small = 0;
    double max_ratio_large = 0;
    std::uint64_t seed = 0;

    bool holder_consistent(double tol = 1e-9) const;
    double stability() const {
        return max_ratio_small > 0 ? std::abs(max_ratio_large - max_ratio_small) / max_ratio_small
                                   : 0.0;
    }
};

// Sampled operator-norm ratio max over seeded trials. Inputs are synthesized
// from random coefficient tensors with polynomial decay `coeff_decay` on the
// large system's lattice; the small-radius pass reuses the same draws
// truncated, so the reported stability isolates the truncation effect.
// When target_plain_l1 is set, the target norm is the plain quadrature L1
// norm (surrogate for Lebesgue targets); otherwise the target is the
// modulation norm with exponents (s1, s2) and target_weight.
BoundednessRow verify_boundedness(
    const std::function<SampledField(std::span<const SampledField>)>& op, int arity,
    const GaborSystem& draw_small, const GaborSystem& draw_large, const SampledField& norm_window,
    std::span<const double> p, std::span<const double> q, double s1, double s2,
    const WeightSpec* input_weight, const WeightSpec* target_weight, int trials,
    double coeff_decay, std::uint64_t seed, std::string family, bool target_plain_l1 = false);

struct DecayReport {
    std::vector<std::array<int, 3>> orders; // (N1,N2,N3); (N,N,N) for the joint bound
    std::vector<double> c_small, c_large;   // sup constants at the two truncations
    std::array<double, 3> decay_slopes{};   // log-log fit per difference direction
    std::array<double, 3> growth_slopes{};  // fit against <beta n>, <beta n0>, <alpha m'>
    std::vector<double> c_joint_small, c_joint_large; // <D>^{-2N} form (N = N1), linear phase
    int radius_small = 0, radius_large = 0;

    double stability(std::size_t i) const {
        return c_large[i] > 0 ? std::abs(c_large[i] - c_small[i]) / c_large[i] : 0.0;
    }
    // C_joint / C_factored for the shared N, one per tested order
    double consistency_ratio(std::size_t i) const {
        return c_large[i] > 0 ? c_joint_large[i] / c_large[i] : 0.0;
    }
};

// Sup of |matrix entry| * <grad Phi(m',n,n0) - (n',m,m0)>^{2N} over the Gabor
// matrix of the problem, for each N in n_list, at two lattice truncations
// (radius_small must not exceed the system radius; the scan runs once).
DecayReport verify_decay_fio(const FioProblem& p, const GaborSystem& sys, int radius_small,
                             std::span<const int> n_list);

// Sup of |entry| / [ <n>^{m1} <n0>^{m2} <m'>^{m3} / (<n+n0-n'>^{2N3}
// <m-m'>^{2N1} <m0-m'>^{2N2}) ] for the bilinear quantization of sigma, plus
// per-direction decay fits and per-variable growth fits.
DecayReport verify_decay_pdo(const SymbolSpec& sigma, const GaborSystem& sys, int radius_small,
                             std::span<const std::array<int, 3>> triples);

} // namespace tfio
