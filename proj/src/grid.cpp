#include "tfio/grid.hpp"

#include <cmath>
#include <numbers>

namespace tfio {

bool SampledField::finite() const {
    for (const cplx& z : data)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

std::vector<std::size_t> strides_of(const std::vector<int>& shape) {
    std::vector<std::size_t> s(shape.size(), 1);
    for (int a = static_cast<int>(shape.size()) - 2; a >= 0; --a)
        s[a] = s[a + 1] * static_cast<std::size_t>(shape[a + 1]);
    return s;
}

void unflatten(std::size_t flat, const std::vector<int>& shape, std::span<int> out) {
    for (int a = static_cast<int>(shape.size()) - 1; a >= 0; --a) {
        out[a] = static_cast<int>(flat % shape[a]);
        flat /= shape[a];
    }
}

double cell_measure(const std::vector<UniformGrid>& blocks) {
    double m = 1.0;
    for (const auto& g : blocks) m *= std::pow(g.spacing(), g.dim);
    return m;
}

double l2_norm(const SampledField& f) {
    double s = 0.0;
    for (const cplx& z : f.data) s += std::norm(z);
    return std::sqrt(s * cell_measure(f.blocks));
}

cplx inner(const SampledField& f, const SampledField& g) {
    if (f.blocks.size() != g.blocks.size() || f.size() != g.size())
        throw std::invalid_argument("inner: field shapes differ");
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < f.size(); ++i) s += f.data[i] * std::conj(g.data[i]);
    return s * cell_measure(f.blocks);
}

void coords_of(const SampledField& f, std::size_t flat, std::span<double> out) {
    const auto shape = f.shape();
    std::vector<int> idx(shape.size());
    unflatten(flat, shape, idx);
    for (std::size_t a = 0; a < shape.size(); ++a)
        out[a] = f.block_of_axis(static_cast<int>(a)).coord(idx[a]);
}

SampledField apply_shift(const SampledField& f, const TimeFrequencyShift& shift) {
    if (f.blocks.size() != 1)
        throw std::invalid_argument("apply_shift: field must have a single block");
    const UniformGrid& g = f.blocks[0];
    const int d = g.dim;
    if (static_cast<int>(shift.translation.size()) != d ||
        static_cast<int>(shift.modulation.size()) != d)
        throw std::invalid_argument("apply_shift: shift dimension mismatch");

    const double h = g.spacing();
    std::vector<long> steps(d);
    for (int a = 0; a < d; ++a) {
        const double q = shift.translation[a] / h;
        const long k = std::lround(q);
        if (std::abs(q - static_cast<double>(k)) > 1e-9)
            throw std::invalid_argument("apply_shift: translation is not a grid multiple");
        steps[a] = k;
    }

    const auto shape = f.shape();
    SampledField out(f.blocks);
    std::vector<int> idx(d);
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t i = 0; i < out.size(); ++i) {
        unflatten(i, shape, idx);
        // source index of T_x: f(t - x)
        std::size_t src = 0;
        bool in_range = true;
        for (int a = 0; a < d; ++a) {
            const long j = idx[a] - steps[a];
            if (j < 0 || j >= g.points) { in_range = false; break; }
            src = src * static_cast<std::size_t>(g.points) + static_cast<std::size_t>(j);
        }
        if (!in_range) continue;
        double phase = 0.0;
        for (int a = 0; a < d; ++a) phase += shift.modulation[a] * g.coord(idx[a]);
        out.data[i] = f.data[src] * std::polar(1.0, two_pi * phase);
    }
    return out;
}

} // namespace tfio
