#pragma once

#include "tfio/coeff.hpp"
#include "tfio/gabor.hpp"
#include "tfio/grid.hpp"
#include "tfio/symbols.hpp"

#include <functional>

namespace tfio {

// A multilinear oscillatory quadrature problem: amplitude sigma(x, xi_1..xi_r)
// with one phase Phi_i(x, xi_i) per analyzed argument, discretized on x_grid
// with the frequency sums running over xi_grids (the dual grid by default).
struct FioProblem {
    SymbolSpec symbol;
    std::vector<PhaseSpec> phases;
    UniformGrid x_grid;
    std::vector<UniformGrid> xi_grids;

    FioProblem(SymbolSpec s, std::vector<PhaseSpec> ph, const UniformGrid& xg);

    int arity() const { return symbol.arity; }
    // joint phase Phi(x, xi_1, .., xi_r) = sum_i Phi_i(x, xi_i) with gradient
    double joint_phase(std::span<const double> z) const;
    void joint_phase_gradient(std::span<const double> z, std::span<double> g) const;
};

// Precompiled general path: the oscillatory weight sigma0 = sigma * prod
// e^{2 pi i Phi_i} sampled once on (x, xi_1..xi_r), applied by direct
// summation against the inputs' Fourier transforms.
class FioOperator {
public:
    explicit FioOperator(FioProblem p);

    const FioProblem& problem() const { return prob_; }
    const SampledField& weight() const { return weight_; }

    SampledField apply(std::span<const SampledField> inputs) const;

private:
    FioProblem prob_;
    SampledField weight_;
};

// T_sigma f by quadrature; collapses to sigma(x) * prod f_i(x) when every
// phase is x.xi and the amplitude does not depend on the frequencies.
SampledField fio_apply(const FioProblem& p, std::span<const SampledField> inputs);

// Bilinear quantization with Phi = x.(xi+eta), always through the general
// path (the separable fast route serves as its oracle, never as the
// implementation).
SampledField pdo_apply(const SymbolSpec& sigma, const SampledField& f, const SampledField& g);

struct KernelField {
    SampledField data; // (r+1) blocks: (x, y_1..y_r)
    int arity() const { return static_cast<int>(data.blocks.size()) - 1; }
};

// K = partial Fourier transform of the oscillatory weight in the frequency
// blocks; B_K then reproduces the quadrature operator exactly.
KernelField kernel_from_symbol(const FioProblem& p);

// B_K f(x) = sum_y K(x, y) prod f_i(y_i) h^{dr}
SampledField bk_apply(const KernelField& k, std::span<const SampledField> inputs);

// Gabor matrix b over (m',n', m_1,n_1, .., m_r,n_r): operator applied to atom
// tuples, tested against atoms. Entries are produced translation tuple by
// translation tuple; each fiber covers the full modulation box.
// visit(trans, fiber): trans = (r+1) translation groups (d ints each); fiber
// is row-major over the (r+1) modulation groups, [-n_range, n_range]^d each.
// out_m_range / out_n_range shrink the test-atom box (slot 0) independently
// of the input box; negative values fall back to the system ranges.
void gabor_matrix_scan(
    const KernelField& k, const GaborSystem& sys,
    const std::function<void(std::span<const int>, std::span<const cplx>)>& visit,
    int out_m_range = -1, int out_n_range = -1);

CoefficientTensor gabor_matrix(const KernelField& k, const GaborSystem& sys,
                               int out_m_range = -1, int out_n_range = -1);
CoefficientTensor gabor_matrix(const FioProblem& p, const GaborSystem& sys,
                               int out_m_range = -1, int out_n_range = -1);

// (O c)_{m',n'} = sum a_{m'n', m_1 n_1, ..} prod_k (c_k)_{m_k, n_k}
CoefficientTensor matrix_apply(const CoefficientTensor& a,
                               std::span<const CoefficientTensor> coefficients);

// weighted l1 of a tensor, weight evaluated at the concatenated lattice
// coordinates of all index groups
double weighted_l1(const CoefficientTensor& a, const WeightSpec& w);

} // namespace tfio
