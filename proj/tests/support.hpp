#pragma once

#include "tfio/grid.hpp"
#include "tfio/rng.hpp"

#include <cmath>
#include <numbers>

namespace tfio::test {

inline constexpr double pi = std::numbers::pi;

// L2-normalized Gaussian 2^{1/4} e^{-pi t^2}, its own Fourier transform under
// the e^{-2 pi i} convention
inline double gauss1(double t) { return std::pow(2.0, 0.25) * std::exp(-pi * t * t); }

inline SampledField gaussian_field(const UniformGrid& g) {
    SampledField f({g});
    const auto shape = f.shape();
    std::vector<int> idx(shape.size());
    for (std::size_t j = 0; j < f.size(); ++j) {
        unflatten(j, shape, idx);
        double v = 1.0;
        for (std::size_t a = 0; a < shape.size(); ++a) v *= gauss1(g.coord(idx[a]));
        f.data[j] = v;
    }
    return f;
}

inline SampledField random_field(const UniformGrid& g, std::uint64_t seed) {
    SampledField f({g});
    Rng rng(seed);
    for (auto& z : f.data) z = rng.complex_gaussian();
    return f;
}

// random trig polynomial restricted to |freq| <= band, supported everywhere
// but envelope-damped toward the window edge so translates stay inside
inline SampledField band_limited_field(const UniformGrid& g, double band, std::uint64_t seed,
                                       double envelope_width = 0.0) {
    SampledField f({g});
    Rng rng(seed);
    const int waves = 8;
    std::vector<cplx> amps(waves);
    std::vector<double> freqs(waves);
    for (int w = 0; w < waves; ++w) {
        amps[static_cast<std::size_t>(w)] = rng.complex_gaussian();
        // on-grid frequencies keep periodization exact
        const double dxi = g.dual().spacing();
        const int kmax = static_cast<int>(band / dxi);
        freqs[static_cast<std::size_t>(w)] =
            dxi * (static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(2 * kmax + 1)) - kmax);
    }
    const auto shape = f.shape();
    std::vector<int> idx(shape.size());
    for (std::size_t j = 0; j < f.size(); ++j) {
        unflatten(j, shape, idx);
        const double t = g.coord(idx[0]);
        cplx v{0, 0};
        for (int w = 0; w < waves; ++w)
            v += amps[static_cast<std::size_t>(w)] *
                 std::polar(1.0, 2 * pi * freqs[static_cast<std::size_t>(w)] * t);
        if (envelope_width > 0) v *= std::exp(-pi * (t / envelope_width) * (t / envelope_width));
        f.data[j] = v;
    }
    return f;
}

inline double max_abs_diff(const SampledField& a, const SampledField& b) {
    double m = 0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a.data[j] - b.data[j]));
    return m;
}

inline double rel_l2_diff(const SampledField& a, const SampledField& b) {
    double num = 0, den = 0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        num += std::norm(a.data[j] - b.data[j]);
        den += std::norm(b.data[j]);
    }
    return den > 0 ? std::sqrt(num / den) : std::sqrt(num);
}

} // namespace tfio::test
