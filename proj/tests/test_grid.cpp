#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tfio/fft.hpp"
#include "tfio/grid.hpp"
#include "tfio/ref.hpp"
#include "support.hpp"

#include <numbers>

using namespace tfio;
using namespace tfio::test;

TEST_CASE("grid invariants") {
    UniformGrid g(1, 256, 8.0);
    CHECK(g.spacing() * g.points == 2 * g.half_width);
    CHECK(g.coord(0) == -8.0);
    CHECK(g.coord(128) == 0.0);
    // dual of the dual is the original grid
    const UniformGrid gd = g.dual().dual();
    CHECK(gd.points == g.points);
    CHECK(gd.half_width == doctest::Approx(g.half_width).epsilon(1e-15));
    CHECK_THROWS(UniformGrid(1, 1, 1.0));
    CHECK_THROWS(UniformGrid(1, 4, -1.0));
}

TEST_CASE("dft of zero is zero") {
    SampledField f({UniformGrid(1, 64, 4.0)});
    const SampledField F = dft(f, -1);
    for (const auto& z : F.data) CHECK(std::abs(z) == 0.0);
}

TEST_CASE("Gaussian is its own transform") {
    const UniformGrid g(1, 256, 8.0);
    const SampledField f = gaussian_field(g);
    const SampledField F = dft(f, -1);
    const UniformGrid gd = F.blocks[0];
    double worst = 0;
    for (int k = 0; k < gd.points; ++k)
        worst = std::max(worst, std::abs(F.data[static_cast<std::size_t>(k)] - cplx{gauss1(gd.coord(k)), 0.0}));
    CHECK(worst < 1e-10);

    // independent oracle: direct quadrature at 4x resolution
    const UniformGrid g4(1, 1024, 8.0);
    const SampledField f4 = gaussian_field(g4);
    const SampledField F4 = ref::dft_direct(f4, {0}, -1);
    const UniformGrid g4d = F4.blocks[0];
    // compare at frequencies shared by both duals
    double worst_oracle = 0;
    for (int k = 0; k < gd.points; ++k) {
        const double xi = gd.coord(k);
        const auto j = g4d.index_of(xi);
        REQUIRE(j.has_value());
        worst_oracle = std::max(worst_oracle,
                                std::abs(F.data[static_cast<std::size_t>(k)] -
                                         F4.data[static_cast<std::size_t>(*j)]));
    }
    CHECK(worst_oracle < 1e-10);
}

TEST_CASE("fft matches the direct-summation reference") {
    const UniformGrid g(1, 48, 3.0); // non power of two
    const SampledField f = random_field(g, 11);
    const SampledField a = dft(f, -1);
    const SampledField b = ref::dft_direct(f, {0}, -1);
    CHECK(max_abs_diff(a, b) < 1e-11);
    const SampledField a2 = dft(f, +1);
    const SampledField b2 = ref::dft_direct(f, {0}, +1);
    CHECK(max_abs_diff(a2, b2) < 1e-11);
}

TEST_CASE("forward then inverse is the identity") {
    const UniformGrid g(1, 128, 6.0);
    const SampledField f = random_field(g, 42);
    const SampledField back = dft(dft(f, -1), +1);
    CHECK(back.blocks[0] == g);
    CHECK(max_abs_diff(back, f) < 1e-12);
}

TEST_CASE("Parseval with quadrature weights") {
    const UniformGrid g(2, 32, 4.0);
    const SampledField f = random_field(g, 7);
    const SampledField F = dft(f, -1);
    CHECK(l2_norm(F) == doctest::Approx(l2_norm(f)).epsilon(1e-12));
}

TEST_CASE("multi-block transform on chosen blocks only") {
    const UniformGrid g(1, 32, 2.0);
    SampledField f({g, g});
    Rng rng(3);
    for (auto& z : f.data) z = rng.complex_gaussian();
    const SampledField F = dft(f, std::set<int>{1}, -1);
    CHECK(F.blocks[0] == g);
    CHECK(F.blocks[1] == g.dual());
    const SampledField Fref = ref::dft_direct(f, {1}, -1);
    CHECK(max_abs_diff(F, Fref) < 1e-11);
    CHECK_THROWS(dft(f, std::set<int>{2}, -1));
}

TEST_CASE("apply_shift identity and delta") {
    const UniformGrid g(1, 64, 4.0);
    SampledField f = random_field(g, 5);
    const SampledField same = apply_shift(f, {{0.0}, {0.0}});
    CHECK(max_abs_diff(same, f) == 0.0);

    SampledField delta({g});
    delta.data[10] = 1.0;
    const SampledField moved = apply_shift(delta, {{g.spacing()}, {0.0}});
    CHECK(std::abs(moved.data[11] - cplx{1, 0}) == 0.0);
    CHECK(std::abs(moved.data[10]) == 0.0);

    CHECK_THROWS(apply_shift(f, {{0.3 * g.spacing()}, {0.0}}));
    CHECK_THROWS(apply_shift(f, {{0.0, 0.0}, {0.0, 0.0}}));
}

TEST_CASE("modulation leaves the magnitude alone") {
    const UniformGrid g(1, 64, 4.0);
    const SampledField f = random_field(g, 9);
    const SampledField shifted = apply_shift(f, {{2 * g.spacing()}, {0.7}});
    for (int j = 2; j < g.points; ++j)
        CHECK(std::abs(shifted.data[static_cast<std::size_t>(j)]) ==
              doctest::Approx(std::abs(f.data[static_cast<std::size_t>(j - 2)])).epsilon(1e-14));
}

TEST_CASE("translation becomes modulation under the transform") {
    const UniformGrid g(1, 128, 8.0);
    const SampledField f = band_limited_field(g, 2.0, 13, 2.0);
    const double x = 4 * g.spacing();
    const SampledField Tf = apply_shift(f, {{x}, {0.0}});
    const SampledField F = dft(f, -1);
    const SampledField TF = dft(Tf, -1);
    // |F(T_x f)| = |f hat| pointwise (phase only)
    for (std::size_t j = 0; j < F.size(); ++j)
        CHECK(std::abs(TF.data[j]) == doctest::Approx(std::abs(F.data[j])).epsilon(1e-9));
}

TEST_CASE("commutation phase between translation and modulation") {
    const UniformGrid g(1, 64, 4.0);
    const SampledField f = random_field(g, 21);
    Rng rng(22);
    for (int t = 0; t < 5; ++t) {
        const double x = g.spacing() * static_cast<int>(rng.next_u64() % 16);
        const double xi = rng.uniform(-2, 2);
        // T_x M_xi = e^{-2 pi i x xi} M_xi T_x
        const SampledField mt = apply_shift(apply_shift(f, {{0.0}, {xi}}), {{x}, {0.0}});
        SampledField tm = apply_shift(apply_shift(f, {{x}, {0.0}}), {{0.0}, {xi}});
        const cplx phase = std::polar(1.0, -2 * std::numbers::pi * x * xi);
        for (auto& z : tm.data) z *= phase;
        CHECK(max_abs_diff(mt, tm) < 1e-12 * 10);
    }
}
