#include "tfio/stft.hpp"

#include "tfio/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tfio {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// integer step of a sub-lattice on a finer lattice
long lattice_step(double coarse, double fine) {
    const double q = coarse / fine;
    const long k = std::lround(q);
    if (k < 1 || std::abs(q - static_cast<double>(k)) > 1e-9)
        throw std::invalid_argument("stft: output grid is not a sub-lattice of the signal grids");
    return k;
}

// window translate steps (in fine-grid units) for one time node
std::vector<long> translate_steps(const UniformGrid& signal_grid, const UniformGrid& time_grid,
                                  std::span<const int> tidx) {
    std::vector<long> ks(static_cast<std::size_t>(signal_grid.dim));
    for (int a = 0; a < signal_grid.dim; ++a) {
        const double x = time_grid.coord(tidx[static_cast<std::size_t>(a)]);
        const double q = x / signal_grid.spacing();
        ks[static_cast<std::size_t>(a)] = std::lround(q);
        if (std::abs(q - static_cast<double>(ks[static_cast<std::size_t>(a)])) > 1e-9)
            throw std::invalid_argument("stft: requested time shift is off-grid");
    }
    return ks;
}

} // namespace

StftField stft(const SampledField& f, const SampledField& g, const UniformGrid& time_grid,
               const UniformGrid& freq_grid) {
    if (f.blocks.size() != 1 || g.blocks.size() != 1)
        throw std::invalid_argument("stft: signal and window must be single-block fields");
    if (!(f.blocks[0] == g.blocks[0]))
        throw std::invalid_argument("stft: signal and window grids differ");
    const UniformGrid& grid = f.blocks[0];
    const int d = grid.dim;
    if (time_grid.dim != d || freq_grid.dim != d)
        throw std::invalid_argument("stft: output grid dimension mismatch");

    const double gnorm = l2_norm(g);
    if (gnorm == 0.0) throw std::invalid_argument("stft: window must be nonzero");

    const UniformGrid dual = grid.dual();
    lattice_step(time_grid.spacing(), grid.spacing());
    const long fstep = lattice_step(freq_grid.spacing(), dual.spacing());
    const auto f0 = dual.index_of(freq_grid.coord(0));
    if (!f0) throw std::invalid_argument("stft: requested frequency is off the dual grid");
    if (*f0 + fstep * (freq_grid.points - 1) >= dual.points)
        throw std::invalid_argument("stft: frequency grid exceeds the resolved band");

    StftField out;
    out.time_grid = time_grid;
    out.freq_grid = freq_grid;
    out.window_norm = gnorm;
    const std::size_t tc = out.time_count(), fc = out.freq_count();
    out.values.assign(tc * fc, cplx{0, 0});

    const auto fine_shape = f.shape();
    std::vector<int> tshape(static_cast<std::size_t>(d), time_grid.points);
    std::vector<int> fshape(static_cast<std::size_t>(d), freq_grid.points);

    // validate every time node up front; throwing inside the parallel loop is not an option
    std::vector<std::vector<long>> steps(tc);
    {
        std::vector<int> tidx(static_cast<std::size_t>(d));
        for (std::size_t ti = 0; ti < tc; ++ti) {
            unflatten(ti, tshape, tidx);
            steps[ti] = translate_steps(grid, time_grid, tidx);
        }
    }

    #pragma omp parallel for schedule(static)
    for (long long ti = 0; ti < static_cast<long long>(tc); ++ti) {
        std::vector<int> fidx(static_cast<std::size_t>(d)), src(static_cast<std::size_t>(d));
        const auto& ks = steps[static_cast<std::size_t>(ti)];

        // f(t) conj(g(t-x)) with the translate zero-filled outside the window
        SampledField w(f.blocks);
        for (std::size_t j = 0; j < f.size(); ++j) {
            unflatten(j, fine_shape, src);
            std::size_t gsrc = 0;
            bool in_range = true;
            for (int a = 0; a < d; ++a) {
                const long sj = src[static_cast<std::size_t>(a)] - ks[static_cast<std::size_t>(a)];
                if (sj < 0 || sj >= grid.points) { in_range = false; break; }
                gsrc = gsrc * static_cast<std::size_t>(grid.points) + static_cast<std::size_t>(sj);
            }
            if (in_range) w.data[j] = f.data[j] * std::conj(g.data[gsrc]);
        }
        const SampledField what = dft(w, -1);

        for (std::size_t fi = 0; fi < fc; ++fi) {
            unflatten(fi, fshape, fidx);
            std::size_t off = 0;
            for (int a = 0; a < d; ++a) {
                const long bin = *f0 + fstep * fidx[static_cast<std::size_t>(a)];
                off = off * static_cast<std::size_t>(dual.points) + static_cast<std::size_t>(bin);
            }
            out.values[static_cast<std::size_t>(ti) * fc + fi] = what.data[off];
        }
    }
    return out;
}

StftField stft(const SampledField& f, const SampledField& g) {
    const UniformGrid& grid = f.blocks.at(0);
    return stft(f, g, grid, grid.dual());
}

SampledField stft_invert(const StftField& F, const SampledField& g) {
    if (g.blocks.size() != 1)
        throw std::invalid_argument("stft_invert: window must be single-block");
    const UniformGrid& grid = g.blocks[0];
    const int d = grid.dim;
    if (F.time_grid.dim != d || F.freq_grid.dim != d)
        throw std::invalid_argument("stft_invert: grid mismatch");
    const double gnorm = l2_norm(g);
    if (gnorm == 0.0) throw std::invalid_argument("stft_invert: window must be nonzero");

    const std::size_t tc = F.time_count(), fc = F.freq_count();
    std::vector<int> tshape(static_cast<std::size_t>(d), F.time_grid.points);
    std::vector<int> fshape(static_cast<std::size_t>(d), F.freq_grid.points);
    const auto gshape = g.shape();
    const double cell = std::pow(F.time_grid.spacing(), d) * std::pow(F.freq_grid.spacing(), d);
    const double scale = cell / (gnorm * gnorm);

    // precompute translate steps per time node
    std::vector<std::vector<long>> steps(tc);
    {
        std::vector<int> tidx(static_cast<std::size_t>(d));
        for (std::size_t ti = 0; ti < tc; ++ti) {
            unflatten(ti, tshape, tidx);
            steps[ti] = translate_steps(grid, F.time_grid, tidx);
        }
    }

    SampledField out(g.blocks);
    #pragma omp parallel for schedule(static)
    for (long long jj = 0; jj < static_cast<long long>(out.size()); ++jj) {
        const std::size_t j = static_cast<std::size_t>(jj);
        std::vector<int> dl(static_cast<std::size_t>(d)), fi(static_cast<std::size_t>(d));
        unflatten(j, gshape, dl);
        std::vector<double> tx(static_cast<std::size_t>(d));
        for (int a = 0; a < d; ++a) tx[static_cast<std::size_t>(a)] = grid.coord(dl[static_cast<std::size_t>(a)]);

        cplx acc{0, 0};
        for (std::size_t ti = 0; ti < tc; ++ti) {
            std::size_t gsrc = 0;
            bool in_range = true;
            for (int a = 0; a < d; ++a) {
                const long sj = dl[static_cast<std::size_t>(a)] - steps[ti][static_cast<std::size_t>(a)];
                if (sj < 0 || sj >= grid.points) { in_range = false; break; }
                gsrc = gsrc * static_cast<std::size_t>(grid.points) + static_cast<std::size_t>(sj);
            }
            if (!in_range) continue;
            cplx s{0, 0};
            for (std::size_t ff = 0; ff < fc; ++ff) {
                unflatten(ff, fshape, fi);
                double phase = 0;
                for (int a = 0; a < d; ++a)
                    phase += F.freq_grid.coord(fi[static_cast<std::size_t>(a)]) * tx[static_cast<std::size_t>(a)];
                s += F.values[ti * fc + ff] * std::polar(1.0, two_pi * phase);
            }
            acc += s * g.data[gsrc];
        }
        out.data[j] = acc * scale;
    }
    return out;
}

double mixed_norm(const StftField& F, double p, double q, const WeightSpec* v) {
    if (p < 1 || q < 1) throw std::invalid_argument("mixed_norm: exponents must be >= 1");
    const int d = F.time_grid.dim;
    if (v && v->dim() != 2 * d)
        throw std::invalid_argument("mixed_norm: weight dimension mismatch");
    const std::size_t tc = F.time_count(), fc = F.freq_count();
    std::vector<int> tshape(static_cast<std::size_t>(d), F.time_grid.points);
    std::vector<int> fshape(static_cast<std::size_t>(d), F.freq_grid.points);
    const double dx = std::pow(F.time_grid.spacing(), d);
    const double dxi = std::pow(F.freq_grid.spacing(), d);

    std::vector<int> tidx(static_cast<std::size_t>(d)), fidx(static_cast<std::size_t>(d));
    std::vector<double> point(static_cast<std::size_t>(2 * d));

    double outer = 0;
    for (std::size_t ff = 0; ff < fc; ++ff) {
        unflatten(ff, fshape, fidx);
        for (int a = 0; a < d; ++a)
            point[static_cast<std::size_t>(d + a)] = F.freq_grid.coord(fidx[static_cast<std::size_t>(a)]);
        double inner = 0;
        for (std::size_t ti = 0; ti < tc; ++ti) {
            unflatten(ti, tshape, tidx);
            for (int a = 0; a < d; ++a)
                point[static_cast<std::size_t>(a)] = F.time_grid.coord(tidx[static_cast<std::size_t>(a)]);
            const double wv = v ? v->eval(point) : 1.0;
            const double m = std::abs(F.values[ti * fc + ff]) * wv;
            if (std::isinf(p)) inner = std::max(inner, m);
            else inner += std::pow(m, p) * dx;
        }
        const double ival = std::isinf(p) ? inner : std::pow(inner, 1.0 / p);
        if (std::isinf(q)) outer = std::max(outer, ival);
        else outer += std::pow(ival, q) * dxi;
    }
    return std::isinf(q) ? outer : std::pow(outer, 1.0 / q);
}

double modulation_norm(const SampledField& f, const SampledField& g, double p, double q,
                       const WeightSpec* v) {
    return mixed_norm(stft(f, g), p, q, v);
}

} // namespace tfio
