#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tfio/torus.hpp"
#include "support.hpp"

#include <cmath>

using namespace tfio;
using namespace tfio::test;

namespace {

const UniformGrid torus_grid(int n) { return UniformGrid(1, n, 0.5); }

// naive double-loop reference for the linear-phase periodic operator
SampledField naive_apply(const TorusSymbol& sigma, const TorusSignal& f, const UniformGrid& xg) {
    SampledField out({xg});
    for (int j = 0; j < xg.points; ++j) {
        const double x = xg.coord(j);
        cplx acc{0, 0};
        for (int k = -f.cutoff; k <= f.cutoff; ++k) {
            const int kk[1] = {k};
            acc += sigma.eval(std::span<const double>(&x, 1), kk) *
                   std::polar(1.0, 2 * pi * x * k) * f.coeffs[static_cast<std::size_t>(k + f.cutoff)];
        }
        out.data[static_cast<std::size_t>(j)] = acc;
    }
    return out;
}

} // namespace

TEST_CASE("flat periodic operator reproduces harmonics exactly") {
    const UniformGrid xg = torus_grid(64);
    const int one[1] = {1};
    const TorusSignal e1 = torus_harmonic(1, 4, one);
    const PhaseSpec lin = phase_linear(1);
    const SampledField out =
        torus_fio_apply(torus_symbol_one(1, 1), std::array{lin}, std::array{e1}, xg);
    double worst = 0;
    for (int j = 0; j < xg.points; ++j) {
        const cplx expect = std::polar(1.0, 2 * pi * xg.coord(j));
        worst = std::max(worst, std::abs(out.data[static_cast<std::size_t>(j)] - expect));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("bilinear flat operator multiplies harmonics") {
    const UniformGrid xg = torus_grid(64);
    const int one[1] = {1};
    const TorusSignal e1 = torus_harmonic(1, 2, one);
    const PhaseSpec lin = phase_linear(1);
    const SampledField out = torus_fio_apply(torus_symbol_one(2, 1), std::array{lin, lin},
                                             std::array{e1, e1}, xg);
    double worst = 0;
    for (int j = 0; j < xg.points; ++j) {
        const cplx expect = std::polar(1.0, 4 * pi * xg.coord(j)); // e^{4 pi i x}
        worst = std::max(worst, std::abs(out.data[static_cast<std::size_t>(j)] - expect));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("decaying symbol matches the naive double loop") {
    const UniformGrid xg = torus_grid(48);
    const TorusSignal f = torus_random(1, 8, 0.8, 91);
    const TorusSymbol sig = torus_symbol_from(torus_symbol_bracket(-1.0, 1));
    const PhaseSpec lin = phase_linear(1);
    const SampledField got = torus_fio_apply(sig, std::array{lin}, std::array{f}, xg);
    const SampledField naive = naive_apply(sig, f, xg);
    CHECK(max_abs_diff(got, naive) < 1e-12);
}

TEST_CASE("operator output is 1-periodic") {
    const TorusSignal f = torus_random(1, 6, 0.7, 92);
    // evaluate the defining sum off-grid at x and x+1 through the signal API
    const TorusSignal shifted = f; // coefficients are x-independent
    for (double x : {0.1234, -0.377, 0.499}) {
        const double x1[1] = {x};
        const double x2[1] = {x + 1.0};
        CHECK(std::abs(shifted.evaluate(x1) - shifted.evaluate(x2)) < 1e-12);
    }
}

TEST_CASE("torus sampling round-trips through exact coefficients") {
    const UniformGrid xg = torus_grid(32);
    const TorusSignal f = torus_random(1, 9, 0.5, 93);
    const SampledField samples = torus_sample(f, xg);
    const TorusSignal back = torus_coefficients(samples, 9);
    double worst = 0;
    for (std::size_t j = 0; j < f.count(); ++j)
        worst = std::max(worst, std::abs(f.coeffs[j] - back.coeffs[j]));
    CHECK(worst < 1e-13);
    CHECK_THROWS(torus_coefficients(samples, 16)); // unresolved cutoff
}

TEST_CASE("kernel of the flat symbol is the Dirichlet kernel") {
    const int cutoff = 8;
    const UniformGrid xg = torus_grid(32), yg = torus_grid(32);
    const PhaseSpec lin = phase_linear(1);
    const KernelField k =
        torus_kernel(torus_symbol_one(1, 1), std::array{lin}, cutoff, xg, yg);
    auto dirichlet = [&](double t) {
        const double s = std::sin(pi * t);
        if (std::abs(s) < 1e-12) return static_cast<double>(2 * cutoff + 1);
        return std::sin((2 * cutoff + 1) * pi * t) / s;
    };
    double worst = 0;
    for (int i = 0; i < 32; ++i)
        for (int j = 0; j < 32; ++j) {
            const double expect = dirichlet(xg.coord(i) - yg.coord(j));
            worst = std::max(worst,
                             std::abs(k.data.data[static_cast<std::size_t>(i * 32 + j)] -
                                      cplx{expect, 0}));
        }
    CHECK(worst < 1e-10);

    // zero symbol gives the zero kernel
    TorusSymbol zero = torus_symbol_one(1, 1);
    zero.eval = [](std::span<const double>, std::span<const int>) { return cplx{0, 0}; };
    const KernelField kz = torus_kernel(zero, std::array{lin}, cutoff, xg, yg);
    for (const auto& z : kz.data.data) CHECK(std::abs(z) == 0.0);
}

TEST_CASE("kernel route equals the direct sum on trig polynomials") {
    const int cutoff = 8;
    const int ny = 2 * cutoff + 2; // resolves the cutoff
    const UniformGrid xg = torus_grid(24), yg = torus_grid(ny);
    const PhaseSpec lin = phase_linear(1);
    const TorusSymbol sig = torus_symbol_from(torus_symbol_bracket(-1.0, 1));
    const TorusSignal f = torus_random(1, cutoff, 0.6, 94);

    const KernelField k = torus_kernel(sig, std::array{lin}, cutoff, xg, yg);
    const SampledField fy = torus_sample(f, yg);
    const SampledField via_kernel = bk_apply(k, std::array{fy});
    const SampledField direct = torus_fio_apply(sig, std::array{lin}, std::array{f}, xg);
    CHECK(max_abs_diff(via_kernel, direct) < 1e-10);

    CHECK_THROWS(torus_kernel(sig, std::array{lin}, cutoff, xg, torus_grid(8)));
}

TEST_CASE("nonlinear phases are rejected on the torus") {
    PhaseSpec bad = phase_linear(1);
    bad.eval = [](std::span<const double> z) { return z[0] * z[1] * z[1]; };
    const TorusSignal f = torus_random(1, 4, 0.5, 95);
    CHECK_THROWS(torus_fio_apply(torus_symbol_one(1, 1), std::array{bad}, std::array{f},
                                 torus_grid(16)));
}

TEST_CASE("torus modulation norm: zero, homogeneity, Moyal") {
    const TorusSignal win = [] {
        TorusSignal w(1, 3);
        for (int k = -3; k <= 3; ++k)
            w.coeffs[static_cast<std::size_t>(k + 3)] = std::exp(-static_cast<double>(k * k));
        return w;
    }();

    TorusSignal zero(1, 5);
    CHECK(torus_modulation_norm(zero, win, 1, 1, 32) == 0.0);

    const TorusSignal f = torus_random(1, 5, 0.4, 96);
    const double n0 = torus_modulation_norm(f, win, 1.5, 2.5, 64);
    TorusSignal cf = f;
    for (auto& z : cf.coeffs) z *= cplx{0.3, -0.4}; // |c| = 0.5
    CHECK(torus_modulation_norm(cf, win, 1.5, 2.5, 64) == doctest::Approx(0.5 * n0).epsilon(1e-12));

    // Moyal: ||V_g f||_2 = ||f||_2 ||g||_2, exact for trig polynomials when
    // the x nodes resolve the quadratic content
    const int nx = 4 * (f.cutoff + win.cutoff) + 4;
    const double lhs = torus_modulation_norm(f, win, 2, 2, nx);
    CHECK(lhs == doctest::Approx(f.l2_norm() * win.l2_norm()).epsilon(1e-10));

    CHECK_THROWS(torus_modulation_norm(f, zero, 2, 2, 32));
}

TEST_CASE("kernel-symbol norm relation: zero, flat, spike stability") {
    const PhaseSpec lin = phase_linear(1);

    TorusSymbol zero = torus_symbol_one(1, 1);
    zero.eval = [](std::span<const double>, std::span<const int>) { return cplx{0, 0}; };
    const Cor54Report rz = check_cor54(zero, std::array{lin}, 4);
    CHECK(rz.sigma0_norm == 0.0);
    CHECK(rz.kernel_norm == 0.0);

    const Cor54Report r1 = check_cor54(torus_symbol_one(1, 1), std::array{lin}, 4);
    CHECK(std::isfinite(r1.sigma0_norm));
    CHECK(std::isfinite(r1.kernel_norm));
    CHECK(r1.ratio > 0.0);
    MESSAGE("flat symbol norm ratio: ", r1.ratio, " -> ", r1.ratio_big);

    // single frequency spike: the ratio is stable under cutoff doubling
    TorusSymbol spike = torus_symbol_one(1, 1);
    spike.eval = [](std::span<const double>, std::span<const int> k) {
        return k[0] == 2 ? cplx{1, 0} : cplx{0, 0};
    };
    const Cor54Report rs = check_cor54(spike, std::array{lin}, 4);
    CHECK(rs.ratio > 0.0);
    CHECK(std::abs(rs.ratio_big - rs.ratio) / rs.ratio < 0.10);
}
