#pragma once

#include "tfio/fio.hpp"
#include "tfio/grid.hpp"
#include "tfio/symbols.hpp"

#include <cstdint>

namespace tfio {

// Trigonometric polynomial on T^d: Fourier coefficients over |k_j| <= cutoff.
// All torus operations are exact finite sums on these signals; truncation
// error never enters, only round-off.
struct TorusSignal {
    int dim = 1;
    int cutoff = 0;
    std::vector<cplx> coeffs; // k in [-F, F]^dim, row-major

    TorusSignal() = default;
    TorusSignal(int d, int f) : dim(d), cutoff(f) {
        coeffs.assign(count(), cplx{0, 0});
    }

    int side() const { return 2 * cutoff + 1; }
    std::size_t count() const {
        std::size_t c = 1;
        for (int i = 0; i < dim; ++i) c *= static_cast<std::size_t>(side());
        return c;
    }
    std::size_t offset(std::span<const int> k) const;
    cplx& at(std::span<const int> k) { return coeffs[offset(k)]; }
    const cplx& at(std::span<const int> k) const { return coeffs[offset(k)]; }

    // exact Fourier sum at any point (1-periodic)
    cplx evaluate(std::span<const double> x) const;

    TorusSignal padded(int new_cutoff) const;
    double l2_norm() const; // Parseval on coefficients
};

TorusSignal torus_harmonic(int dim, int cutoff, std::span<const int> k);
TorusSignal torus_random(int dim, int cutoff, double decay, std::uint64_t seed);

// samples on a grid with R = 1/2 (one period, spacing 1/N)
SampledField torus_sample(const TorusSignal& f, const UniformGrid& x_grid);
// exact coefficient recovery; requires x_grid.points >= 2 cutoff + 1
TorusSignal torus_coefficients(const SampledField& f, int cutoff);

// Amplitude sigma(x, k_1..k_r) with integer frequency arguments.
struct TorusSymbol {
    int arity = 1;
    int dim = 1;
    std::function<cplx(std::span<const double>, std::span<const int>)> eval;
    std::string name = "torus-symbol";
};

TorusSymbol torus_symbol_one(int r, int d);
TorusSymbol torus_symbol_from(const SymbolSpec& s); // wraps a torus-flagged SymbolSpec

// exact sum over |k_i| <= f_i.cutoff of e^{2 pi i sum Phi_i(x, k_i)} sigma(x,k)
// prod fhat_i(k_i); phases must be linear in the integer variable.
SampledField torus_fio_apply(const TorusSymbol& sigma, std::span<const PhaseSpec> phases,
                             std::span<const TorusSignal> inputs, const UniformGrid& x_grid);

// K(x,y) = sum_k e^{2 pi i [sum Phi_i(x,k_i) - sum k_i . y_i]} sigma(x,k) on
// (x_grid, y_grid^r); y_grid must resolve the cutoff (points >= 2F+1).
KernelField torus_kernel(const TorusSymbol& sigma, std::span<const PhaseSpec> phases, int cutoff,
                         const UniformGrid& x_grid, const UniformGrid& y_grid);

// V_g f(x, m) on T^d x Z^d, exact through coefficient convolution; norm is the
// inner p-sum over m and outer q-integral over x (Riemann on x_points nodes).
double torus_modulation_norm(const TorusSignal& f, const TorusSignal& g, double p, double q,
                             int x_points);

struct Cor54Report {
    double sigma0_norm = 0;      // sum_k M^1_x of sigma0(., k)
    double kernel_norm = 0;      // M^1 of K on the product torus
    double ratio = 0;            // kernel_norm / sigma0_norm
    double sigma0_norm_big = 0;  // same at doubled cutoff
    double kernel_norm_big = 0;
    double ratio_big = 0;
};

Cor54Report check_cor54(const TorusSymbol& sigma, std::span<const PhaseSpec> phases, int cutoff);

} // namespace tfio
