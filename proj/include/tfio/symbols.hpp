#pragma once

#include "tfio/grid.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>

namespace tfio {

// Declared symbol class. orders holds (m_1..m_r) for the Hormander kinds and
// (m1, m2, m3) for SG/Rough; derivative_budget holds (N1, N2, N3) for Rough.
struct SymbolClass {
    enum class Kind { None, Hormander, SG, Rough, TorusHormander };
    Kind kind = Kind::None;
    std::vector<double> orders;
    double rho = 1.0;
    double delta = 0.0;
    std::array<int, 3> derivative_budget{0, 0, 0};
};

// Amplitude sigma(x, xi_1, .., xi_r). The evaluator takes the concatenated
// coordinate vector of length d(r+1); deriv, when present, evaluates an
// arbitrary analytic partial derivative (multi-index over all coordinates).
struct SymbolSpec {
    int arity = 1;
    int dim = 1;
    SymbolClass symbol_class;
    std::function<cplx(std::span<const double>)> eval;
    std::function<cplx(std::span<const int>, std::span<const double>)> deriv; // may be null
    bool x_only = false;
    bool constant = false;
    bool torus = false; // frequency arguments are integers
    std::string name = "symbol";

    int coord_count() const { return dim * (arity + 1); }
    cplx operator()(std::span<const double> z) const { return eval(z); }
};

// Phase function on 2 blocks (x, xi) or 3 blocks (x, xi, eta); the analytic
// gradient is required (decay constants are evaluated at lattice points where
// finite differences would pollute the sup).
struct PhaseSpec {
    int dim = 1;
    int var_count = 2;
    std::function<double(std::span<const double>)> eval;
    std::function<void(std::span<const double>, std::span<double>)> gradient;
    bool linear_in_second = false;
    bool standard_linear = false; // exactly x . xi
    double degree_two_bound = 0.0; // known cap on |d^a Phi|, |a| >= 2 (0 = unknown)
    std::string name = "phase";

    int coord_count() const { return dim * var_count; }
};

// ---- built-in library (config grammar names in parentheses) ----

SymbolSpec symbol_one(int r, int d);                       // one
// <x>^{e0} <xi>^{e1} ... per variable block; analytic derivatives (d = 1)
SymbolSpec symbol_bracket_powers(std::vector<double> exponents, int d = 1); // sg(m1,m2,m3) via (m3,m1,m2)
SymbolSpec symbol_sg_power(double m1, double m2, double m3);               // sg(m1,m2,m3), r = 2
SymbolSpec symbol_peaked(double a, int r, int d = 1);      // peaked(a): prod <xi_k>^{-a}
SymbolSpec symbol_gaussian(int r, int d);                  // gauss: prod e^{-pi z^2}
SymbolSpec symbol_random_trig(int r, int d, int waves, double amp, std::uint64_t seed); // rand(...)
SymbolSpec torus_symbol_bracket(double m, int r = 1);      // tbracket(m): <k>^m

PhaseSpec phase_zero(int d);                // phase.zero
PhaseSpec phase_linear(int d);              // phase.linear: x.xi
PhaseSpec phase_shifted(double c, int d);   // phase.shifted(c): (x+c).xi
PhaseSpec phase_perturbed(double eps, int d); // phase.perturbed(eps): x.xi + eps sin(x_1) xi_1
// joint 3-block phase sum Phi_1(x,xi) + Phi_2(x,eta)
PhaseSpec phase_join_bilinear(const PhaseSpec& p1, const PhaseSpec& p2);

// ---- operations ----

// Tensor of sigma values on (r+1) grid blocks; deterministic, memoized per
// grid signature.
SampledField sample_symbol(const SymbolSpec& s, const std::vector<UniformGrid>& grids);

struct CertifyEntry {
    std::vector<int> multi_index; // per coordinate
    double ratio = 0.0;           // max |d^a sigma| / declared bound over the box
    double ratio_half_box = 0.0;
    bool growing = false;     // ratio escalates when the box doubles
    bool fd_unstable = false; // finite differences disagreed between steps
};

struct CertifyReport {
    bool pass = false;
    std::vector<CertifyEntry> entries;
    std::string notes;
};

// Checks every derivative up to order_limit (one cap per variable block)
// against the declared class bound on [-box, box]^{d(r+1)}; ratios evaluated
// at box and box/2, growth beyond 1.4x fails the certificate.
CertifyReport certify_class(const SymbolSpec& s, std::span<const int> order_limit, double box,
                            double tol);

// Iterated forward difference over the integer frequency variables,
// (D_k f)(k) = f(k+e) - f(k); beta has one entry per frequency coordinate.
SymbolSpec forward_difference(const SymbolSpec& s, std::span<const int> beta);

struct PhaseReport {
    double delta_estimate = 0.0; // min |det mixed Hessian| over the box
    double max_second = 0.0;     // max sampled |d^a Phi|, |a| = 2
    double max_third = 0.0;      // max sampled |d^a Phi|, |a| = 3
    double gradient_mismatch = 0.0;
    bool gradient_ok = false;
    bool degenerate = false;
};

PhaseReport phase_checks(const PhaseSpec& p, double box, int samples,
                         std::uint64_t seed = 0x9a7eull);

} // namespace tfio
