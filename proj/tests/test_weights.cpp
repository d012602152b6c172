#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tfio/rng.hpp"
#include "tfio/weights.hpp"

#include <cmath>

using namespace tfio;

TEST_CASE("omega with s=0 is constant one") {
    const WeightSpec w = WeightSpec::omega(0.0, 3);
    Rng rng(1);
    for (int t = 0; t < 20; ++t) {
        const std::vector<double> x{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
        CHECK(w.eval(x) == 1.0);
    }
}

TEST_CASE("pullback by the phase-space map, worked example") {
    // r=1, d=1: X = (u1,u2,v1,v2) = (1,0,0,1) maps to ((1,-1),(0,0))
    const PhaseSpaceTransform A{1, 1};
    const WeightSpec omega2_pair = WeightSpec::omega(2.0, 2);
    const WeightSpec omega_prod = WeightSpec::tensor({omega2_pair, omega2_pair});
    const WeightSpec pulled = WeightSpec::pullback_forward(omega_prod, A);
    const std::vector<double> X{1, 0, 0, 1};
    CHECK(pulled.eval(X) == doctest::Approx(3.0).epsilon(1e-14));
    // direct check of the mapped point
    const auto y = A.forward(X);
    CHECK(y[0] == 1.0);
    CHECK(y[1] == -1.0);
    CHECK(y[2] == 0.0);
    CHECK(y[3] == 0.0);
}

TEST_CASE("v split weight with zero orders is one") {
    const WeightSpec v = WeightSpec::v_split(0.0, 0.0, 2);
    Rng rng(2);
    for (int t = 0; t < 10; ++t) {
        std::vector<double> x(6);
        for (auto& xi : x) xi = rng.uniform(-3, 3);
        CHECK(v.eval(x) == 1.0);
    }
}

TEST_CASE("v split matches its three factors") {
    const WeightSpec v = WeightSpec::v_split(-2.0, 1.0, 1);
    const std::vector<double> z{1.0, 2.0, 3.0};
    const double expect = bracket_pow(1.0, 1.0) * bracket_pow(2.0, -2.0) * bracket_pow(3.0, 1.0);
    CHECK(v.eval(z) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("transform round-trips on random vectors") {
    Rng rng(3);
    for (int r = 1; r <= 3; ++r)
        for (int d = 1; d <= 2; ++d) {
            const PhaseSpaceTransform t{r, d};
            std::vector<double> x(static_cast<std::size_t>(t.vec_len()));
            for (auto& xi : x) xi = rng.uniform(-4, 4);
            const auto y = t.forward(x);
            const auto back = t.inverse(y);
            for (std::size_t i = 0; i < x.size(); ++i)
                CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-12));
            const auto fwd2 = t.forward(t.inverse(x));
            for (std::size_t i = 0; i < x.size(); ++i)
                CHECK(fwd2[i] == doctest::Approx(x[i]).epsilon(1e-12));
        }
}

TEST_CASE("pullback by A then B returns the original weight") {
    const PhaseSpaceTransform t{2, 1};
    const WeightSpec base = WeightSpec::omega(1.5, t.vec_len());
    const WeightSpec round = WeightSpec::pullback_inverse(WeightSpec::pullback_forward(base, t), t);
    Rng rng(4);
    std::vector<double> x(static_cast<std::size_t>(t.vec_len()));
    for (int trial = 0; trial < 50; ++trial) {
        for (auto& xi : x) xi = rng.uniform(-4, 4);
        CHECK(round.eval(x) == doctest::Approx(base.eval(x)).epsilon(1e-12));
    }
}

TEST_CASE("positivity of every built-in kind") {
    const PhaseSpaceTransform t{1, 1};
    const std::vector<WeightSpec> kinds{
        WeightSpec::one(3),
        WeightSpec::omega(2.0, 3),
        WeightSpec::omega(-1.5, 3),
        WeightSpec::v_split(1.0, -2.0, 1),
        WeightSpec::tensor({WeightSpec::omega(1.0, 2), WeightSpec::omega(-1.0, 1)}),
        WeightSpec::pullback_forward(WeightSpec::omega(2.0, 4), t),
    };
    Rng rng(5);
    for (const auto& w : kinds) {
        std::vector<double> x(static_cast<std::size_t>(w.dim()));
        for (int trial = 0; trial < 10000; ++trial) {
            for (auto& xi : x) xi = rng.uniform(-10, 10);
            CHECK(w.eval(x) > 0.0);
        }
    }
}

TEST_CASE("symmetry under negation, sampled") {
    const std::vector<WeightSpec> kinds{WeightSpec::omega(2.0, 2), WeightSpec::v_split(1.0, 2.0, 1)};
    Rng rng(6);
    for (const auto& w : kinds) {
        std::vector<double> x(static_cast<std::size_t>(w.dim())), nx(x.size());
        for (int trial = 0; trial < 100; ++trial) {
            for (std::size_t i = 0; i < x.size(); ++i) {
                x[i] = rng.uniform(-5, 5);
                nx[i] = -x[i];
            }
            CHECK(w.eval(x) == doctest::Approx(w.eval(nx)).epsilon(1e-14));
        }
    }
}

TEST_CASE("moderateness: constant weight has constant one") {
    const WeightSpec w = WeightSpec::one(2);
    const auto rep = check_s_moderate(w, 0.0, 200, 4.0);
    CHECK(rep.pass);
    CHECK(rep.constant == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("moderateness ratio at the unit pair") {
    // <2>^2 / (<1>^2 <1>^2) = 5/4
    const WeightSpec w = WeightSpec::omega(2.0, 2);
    const std::vector<double> x{1, 0}, y{1, 0};
    CHECK(moderate_ratio(w, 2.0, x, y) == doctest::Approx(1.25).epsilon(1e-14));
    const auto rep = check_s_moderate(w, 2.0, 500, 4.0);
    CHECK(rep.pass);
    CHECK(rep.constant >= 1.25);
}

TEST_CASE("Peetre bound for omega_s against itself") {
    Rng seeds(7);
    for (double s : {0.5, 1.0, 2.0, 3.0}) {
        const WeightSpec w = WeightSpec::omega(s, 2);
        const auto rep = check_s_moderate(w, s, 2000, 8.0, seeds.next_u64());
        CHECK(rep.pass);
        CHECK(rep.constant <= std::pow(2.0, s / 2) + 1e-9);
    }
}

TEST_CASE("under-weighted moderateness grows with the box") {
    // omega_2 against s=1: the best constant doubles when the box doubles.
    // Oracle: dense evaluation on a coarse lattice of pairs.
    const WeightSpec w = WeightSpec::omega(2.0, 1);
    auto dense_max = [&](double box) {
        double worst = 0;
        const int q = 41;
        for (int i = 0; i < q; ++i)
            for (int j = 0; j < q; ++j) {
                const std::vector<double> x{-box + 2 * box * i / (q - 1)};
                const std::vector<double> y{-box + 2 * box * j / (q - 1)};
                worst = std::max(worst, moderate_ratio(w, 1.0, x, y));
            }
        return worst;
    };
    const double c1 = dense_max(8.0), c2 = dense_max(16.0), c4 = dense_max(32.0);
    CHECK(c2 / c1 == doctest::Approx(2.0).epsilon(0.15));
    CHECK(c4 / c2 == doctest::Approx(2.0).epsilon(0.15));
    // the sampled check reports the same growth
    const auto r1 = check_s_moderate(w, 1.0, 500, 8.0);
    const auto r2 = check_s_moderate(w, 1.0, 500, 16.0);
    CHECK(r2.constant / r1.constant > 1.5);
}

TEST_CASE("dimension mismatch is rejected") {
    const WeightSpec w = WeightSpec::omega(1.0, 2);
    const std::vector<double> bad{1.0, 2.0, 3.0};
    CHECK_THROWS(w.eval(bad));
}
