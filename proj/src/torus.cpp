#include "tfio/torus.hpp"

#include "tfio/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tfio {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

void check_torus_grid(const UniformGrid& g) {
    if (std::abs(g.half_width - 0.5) > 1e-12)
        throw std::invalid_argument("torus: grids cover one period (half_width 1/2)");
}

void check_linear_phases(std::span<const PhaseSpec> phases, int d, std::uint64_t seed = 0x70f5ull) {
    Rng rng(seed);
    for (const auto& p : phases) {
        if (!p.linear_in_second)
            throw std::invalid_argument("torus: phases must be declared linear in the frequency variable");
        if (p.var_count != 2 || p.dim != d)
            throw std::invalid_argument("torus: phases must be 2-block of matching dimension");
        // spot-check additivity in the integer variable
        for (int t = 0; t < 4; ++t) {
            std::vector<double> z1(static_cast<std::size_t>(2 * d)), z2 = z1, z12 = z1, z0 = z1;
            for (int a = 0; a < d; ++a) {
                const double x = rng.uniform(0.0, 1.0);
                z1[static_cast<std::size_t>(a)] = z2[static_cast<std::size_t>(a)] =
                    z12[static_cast<std::size_t>(a)] = z0[static_cast<std::size_t>(a)] = x;
                const double k1 = std::floor(rng.uniform(-8.0, 8.0));
                const double k2 = std::floor(rng.uniform(-8.0, 8.0));
                z1[static_cast<std::size_t>(d + a)] = k1;
                z2[static_cast<std::size_t>(d + a)] = k2;
                z12[static_cast<std::size_t>(d + a)] = k1 + k2;
                z0[static_cast<std::size_t>(d + a)] = 0.0;
            }
            const double lhs = p.eval(z12) + p.eval(z0);
            const double rhs = p.eval(z1) + p.eval(z2);
            if (std::abs(lhs - rhs) > 1e-9 * std::max(1.0, std::abs(rhs)))
                throw std::invalid_argument("torus: phase failed the linearity spot-check");
        }
    }
}

} // namespace

std::size_t TorusSignal::offset(std::span<const int> k) const {
    if (static_cast<int>(k.size()) != dim)
        throw std::invalid_argument("TorusSignal: index dimension mismatch");
    std::size_t off = 0;
    for (int a = 0; a < dim; ++a) {
        const int j = k[static_cast<std::size_t>(a)];
        if (j < -cutoff || j > cutoff)
            throw std::out_of_range("TorusSignal: frequency outside the cutoff");
        off = off * static_cast<std::size_t>(side()) + static_cast<std::size_t>(j + cutoff);
    }
    return off;
}

cplx TorusSignal::evaluate(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim)
        throw std::invalid_argument("TorusSignal: point dimension mismatch");
    std::vector<int> shape(static_cast<std::size_t>(dim), side());
    std::vector<int> k(static_cast<std::size_t>(dim));
    cplx s{0, 0};
    for (std::size_t f = 0; f < count(); ++f) {
        unflatten(f, shape, k);
        double ph = 0;
        for (int a = 0; a < dim; ++a)
            ph += (k[static_cast<std::size_t>(a)] - cutoff) * x[static_cast<std::size_t>(a)];
        s += coeffs[f] * std::polar(1.0, two_pi * ph);
    }
    return s;
}

TorusSignal TorusSignal::padded(int new_cutoff) const {
    if (new_cutoff < cutoff) throw std::invalid_argument("TorusSignal: cannot shrink by padding");
    TorusSignal out(dim, new_cutoff);
    std::vector<int> shape(static_cast<std::size_t>(dim), side());
    std::vector<int> k(static_cast<std::size_t>(dim));
    for (std::size_t f = 0; f < count(); ++f) {
        unflatten(f, shape, k);
        for (int a = 0; a < dim; ++a) k[static_cast<std::size_t>(a)] -= cutoff;
        out.at(k) = coeffs[f];
    }
    return out;
}

double TorusSignal::l2_norm() const {
    double s = 0;
    for (const cplx& c : coeffs) s += std::norm(c);
    return std::sqrt(s);
}

TorusSignal torus_harmonic(int dim, int cutoff, std::span<const int> k) {
    TorusSignal f(dim, cutoff);
    f.at(k) = cplx{1, 0};
    return f;
}

TorusSignal torus_random(int dim, int cutoff, double decay, std::uint64_t seed) {
    TorusSignal f(dim, cutoff);
    Rng rng(seed);
    std::vector<int> shape(static_cast<std::size_t>(dim), f.side());
    std::vector<int> k(static_cast<std::size_t>(dim));
    for (std::size_t j = 0; j < f.count(); ++j) {
        unflatten(j, shape, k);
        double w = 1.0;
        for (int a = 0; a < dim; ++a)
            w *= std::pow(1.0 + std::abs(k[static_cast<std::size_t>(a)] - cutoff), -decay);
        f.coeffs[j] = rng.complex_gaussian() * w;
    }
    return f;
}

SampledField torus_sample(const TorusSignal& f, const UniformGrid& x_grid) {
    check_torus_grid(x_grid);
    if (x_grid.dim != f.dim) throw std::invalid_argument("torus_sample: dimension mismatch");
    SampledField out({x_grid});
    const auto shape = out.shape();
    #pragma omp parallel for schedule(static)
    for (long long jj = 0; jj < static_cast<long long>(out.size()); ++jj) {
        const std::size_t j = static_cast<std::size_t>(jj);
        std::vector<double> x(static_cast<std::size_t>(f.dim));
        coords_of(out, j, x);
        out.data[j] = f.evaluate(x);
    }
    return out;
}

TorusSignal torus_coefficients(const SampledField& f, int cutoff) {
    if (f.blocks.size() != 1) throw std::invalid_argument("torus_coefficients: single-block field");
    const UniformGrid& g = f.blocks[0];
    check_torus_grid(g);
    if (g.points < 2 * cutoff + 1)
        throw std::invalid_argument("torus_coefficients: grid does not resolve the cutoff");
    TorusSignal out(g.dim, cutoff);
    const auto shape = f.shape();
    std::vector<int> kshape(static_cast<std::size_t>(g.dim), out.side());
    const double cell = 1.0 / static_cast<double>(f.size());
    #pragma omp parallel for schedule(static)
    for (long long kk = 0; kk < static_cast<long long>(out.count()); ++kk) {
        std::vector<int> k(static_cast<std::size_t>(g.dim)), src(static_cast<std::size_t>(g.dim));
        unflatten(static_cast<std::size_t>(kk), kshape, k);
        cplx s{0, 0};
        for (std::size_t j = 0; j < f.size(); ++j) {
            unflatten(j, shape, src);
            double ph = 0;
            for (int a = 0; a < g.dim; ++a)
                ph += (k[static_cast<std::size_t>(a)] - cutoff) * g.coord(src[static_cast<std::size_t>(a)]);
            s += f.data[j] * std::polar(1.0, -two_pi * ph);
        }
        out.coeffs[static_cast<std::size_t>(kk)] = s * cell;
    }
    return out;
}

TorusSymbol torus_symbol_one(int r, int d) {
    TorusSymbol s;
    s.arity = r;
    s.dim = d;
    s.name = "one";
    s.eval = [](std::span<const double>, std::span<const int>) { return cplx{1, 0}; };
    return s;
}

TorusSymbol torus_symbol_from(const SymbolSpec& spec) {
    if (!spec.torus) throw std::invalid_argument("torus_symbol_from: symbol is not torus-typed");
    TorusSymbol s;
    s.arity = spec.arity;
    s.dim = spec.dim;
    s.name = spec.name;
    auto base = std::make_shared<SymbolSpec>(spec);
    s.eval = [base](std::span<const double> x, std::span<const int> k) {
        std::vector<double> z(x.begin(), x.end());
        for (int v : k) z.push_back(static_cast<double>(v));
        return base->eval(z);
    };
    return s;
}

SampledField torus_fio_apply(const TorusSymbol& sigma, std::span<const PhaseSpec> phases,
                             std::span<const TorusSignal> inputs, const UniformGrid& x_grid) {
    const int r = sigma.arity;
    const int d = sigma.dim;
    if (static_cast<int>(phases.size()) != r || static_cast<int>(inputs.size()) != r)
        throw std::invalid_argument("torus_fio_apply: arity mismatch");
    check_torus_grid(x_grid);
    if (x_grid.dim != d) throw std::invalid_argument("torus_fio_apply: grid dimension mismatch");
    check_linear_phases(phases, d);
    for (const auto& f : inputs)
        if (f.dim != d) throw std::invalid_argument("torus_fio_apply: signal dimension mismatch");

    // enumerate the product of the inputs' frequency boxes
    std::vector<std::size_t> counts(static_cast<std::size_t>(r));
    std::size_t tail = 1;
    for (int k = 0; k < r; ++k) {
        counts[static_cast<std::size_t>(k)] = inputs[static_cast<std::size_t>(k)].count();
        tail *= counts[static_cast<std::size_t>(k)];
    }
    std::vector<std::size_t> divisors(static_cast<std::size_t>(r), 1);
    for (int k = r - 2; k >= 0; --k)
        divisors[static_cast<std::size_t>(k)] =
            divisors[static_cast<std::size_t>(k + 1)] * counts[static_cast<std::size_t>(k + 1)];

    SampledField out({x_grid});
    const auto shape = out.shape();

    #pragma omp parallel for schedule(static)
    for (long long jj = 0; jj < static_cast<long long>(out.size()); ++jj) {
        const std::size_t j = static_cast<std::size_t>(jj);
        std::vector<double> x(static_cast<std::size_t>(d));
        coords_of(out, j, x);
        std::vector<int> kvec(static_cast<std::size_t>(d * r));
        std::vector<int> kone(static_cast<std::size_t>(d));
        std::vector<double> z2(static_cast<std::size_t>(2 * d));
        std::vector<int> kshape(static_cast<std::size_t>(d), 0);
        cplx acc{0, 0};
        for (std::size_t t = 0; t < tail; ++t) {
            std::size_t rem = t;
            cplx prod{1, 0};
            double phase = 0;
            for (int k = 0; k < r; ++k) {
                const TorusSignal& f = inputs[static_cast<std::size_t>(k)];
                const std::size_t ik = rem / divisors[static_cast<std::size_t>(k)];
                rem %= divisors[static_cast<std::size_t>(k)];
                prod *= f.coeffs[ik];
                // decode the frequency of this input
                std::fill(kshape.begin(), kshape.end(), f.side());
                unflatten(ik, kshape, kone);
                for (int a = 0; a < d; ++a) {
                    const int kv = kone[static_cast<std::size_t>(a)] - f.cutoff;
                    kvec[static_cast<std::size_t>(k * d + a)] = kv;
                    z2[static_cast<std::size_t>(a)] = x[static_cast<std::size_t>(a)];
                    z2[static_cast<std::size_t>(d + a)] = kv;
                }
                phase += phases[static_cast<std::size_t>(k)].eval(z2);
            }
            if (prod == cplx{0, 0}) continue;
            acc += sigma.eval(x, kvec) * std::polar(1.0, two_pi * phase) * prod;
        }
        out.data[j] = acc;
    }
    return out;
}

KernelField torus_kernel(const TorusSymbol& sigma, std::span<const PhaseSpec> phases, int cutoff,
                         const UniformGrid& x_grid, const UniformGrid& y_grid) {
    const int r = sigma.arity;
    const int d = sigma.dim;
    check_torus_grid(x_grid);
    check_torus_grid(y_grid);
    if (y_grid.points < 2 * cutoff + 1)
        throw std::invalid_argument("torus_kernel: y grid does not resolve the cutoff (need N >= 2F+1)");
    check_linear_phases(phases, d);

    std::vector<UniformGrid> blocks;
    blocks.push_back(x_grid);
    for (int k = 0; k < r; ++k) blocks.push_back(y_grid);
    SampledField out(blocks);
    const auto shape = out.shape();
    const int axes = d * (r + 1);

    const int fside = 2 * cutoff + 1;
    std::size_t fcount = 1;
    for (int i = 0; i < d * r; ++i) fcount *= static_cast<std::size_t>(fside);
    std::vector<int> fsh(static_cast<std::size_t>(d * r), fside);

    #pragma omp parallel for schedule(static)
    for (long long jj = 0; jj < static_cast<long long>(out.size()); ++jj) {
        const std::size_t j = static_cast<std::size_t>(jj);
        std::vector<double> z(static_cast<std::size_t>(axes));
        coords_of(out, j, z);
        std::vector<int> kv(static_cast<std::size_t>(d * r));
        std::vector<double> z2(static_cast<std::size_t>(2 * d));
        cplx acc{0, 0};
        for (std::size_t f = 0; f < fcount; ++f) {
            unflatten(f, fsh, kv);
            double phase = 0;
            for (int k = 0; k < r; ++k)
                for (int a = 0; a < d; ++a) {
                    const int kk = kv[static_cast<std::size_t>(k * d + a)] - cutoff;
                    z2[static_cast<std::size_t>(a)] = z[static_cast<std::size_t>(a)];
                    z2[static_cast<std::size_t>(d + a)] = kk;
                    phase -= kk * z[static_cast<std::size_t>((k + 1) * d + a)];
                    if (a == d - 1) phase += phases[static_cast<std::size_t>(k)].eval(z2);
                }
            std::vector<int> ks(static_cast<std::size_t>(d * r));
            for (int i = 0; i < d * r; ++i) ks[static_cast<std::size_t>(i)] = kv[static_cast<std::size_t>(i)] - cutoff;
            acc += sigma.eval(std::span<const double>(z.data(), static_cast<std::size_t>(d)), ks) *
                   std::polar(1.0, two_pi * phase);
        }
        out.data[j] = acc;
    }
    return KernelField{std::move(out)};
}

double torus_modulation_norm(const TorusSignal& f, const TorusSignal& g, double p, double q,
                             int x_points) {
    if (f.dim != g.dim) throw std::invalid_argument("torus_modulation_norm: dimension mismatch");
    if (g.l2_norm() == 0.0) throw std::invalid_argument("torus_modulation_norm: zero window");
    if (p < 1 || q < 1) throw std::invalid_argument("torus_modulation_norm: exponents must be >= 1");
    const int d = f.dim;
    const int mrad = f.cutoff + g.cutoff; // V vanishes beyond this
    const int mside = 2 * mrad + 1;

    std::size_t xcount = 1, mcount = 1;
    for (int a = 0; a < d; ++a) {
        xcount *= static_cast<std::size_t>(x_points);
        mcount *= static_cast<std::size_t>(mside);
    }
    std::vector<int> xsh(static_cast<std::size_t>(d), x_points), msh(static_cast<std::size_t>(d), mside);
    std::vector<int> fsh(static_cast<std::size_t>(d), f.side());

    const double cell = 1.0 / static_cast<double>(xcount);
    double outer = 0;
    // torus convention: inner p over the discrete frequency, outer q over position
    std::vector<double> per_x(xcount, 0.0);

    // V(x,m) = sum_{diff in window support} fhat(m+diff) conj(ghat(diff)) e^{2 pi i diff.x}
    std::size_t wcount = 1;
    for (int a = 0; a < d; ++a) wcount *= static_cast<std::size_t>(g.side());
    std::vector<int> wsh(static_cast<std::size_t>(d), g.side());
    (void)fsh;

    #pragma omp parallel for schedule(static)
    for (long long xx = 0; xx < static_cast<long long>(xcount); ++xx) {
        const std::size_t xi = static_cast<std::size_t>(xx);
        std::vector<int> xn(static_cast<std::size_t>(d)), mn(static_cast<std::size_t>(d)),
            wn(static_cast<std::size_t>(d)), kn(static_cast<std::size_t>(d));
        unflatten(xi, xsh, xn);
        std::vector<double> x(static_cast<std::size_t>(d));
        for (int a = 0; a < d; ++a)
            x[static_cast<std::size_t>(a)] = static_cast<double>(xn[static_cast<std::size_t>(a)]) / x_points;
        double inner = 0;
        for (std::size_t mi = 0; mi < mcount; ++mi) {
            unflatten(mi, msh, mn);
            cplx v{0, 0};
            for (std::size_t wi = 0; wi < wcount; ++wi) {
                unflatten(wi, wsh, wn);
                bool ok = true;
                double ph = 0;
                for (int a = 0; a < d; ++a) {
                    const int diff = wn[static_cast<std::size_t>(a)] - g.cutoff;
                    const int k = (mn[static_cast<std::size_t>(a)] - mrad) + diff;
                    if (k < -f.cutoff || k > f.cutoff) { ok = false; break; }
                    kn[static_cast<std::size_t>(a)] = k;
                    ph += diff * x[static_cast<std::size_t>(a)];
                }
                if (!ok) continue;
                v += f.at(kn) * std::conj(g.coeffs[wi]) * std::polar(1.0, two_pi * ph);
            }
            const double mag = std::abs(v);
            if (std::isinf(p)) inner = std::max(inner, mag);
            else inner += std::pow(mag, p);
        }
        per_x[xi] = std::isinf(p) ? inner : std::pow(inner, 1.0 / p);
    }
    for (std::size_t xi = 0; xi < xcount; ++xi) {
        if (std::isinf(q)) outer = std::max(outer, per_x[xi]);
        else outer += std::pow(per_x[xi], q) * cell;
    }
    return std::isinf(q) ? outer : std::pow(outer, 1.0 / q);
}

namespace {

// 1-d Gaussian-coefficient window on the torus
TorusSignal norm_window(int dim, int cutoff) {
    TorusSignal g(dim, cutoff);
    std::vector<int> shape(static_cast<std::size_t>(dim), g.side());
    std::vector<int> k(static_cast<std::size_t>(dim));
    for (std::size_t j = 0; j < g.count(); ++j) {
        unflatten(j, shape, k);
        double e = 0;
        for (int a = 0; a < dim; ++a) {
            const double kk = k[static_cast<std::size_t>(a)] - cutoff;
            e += kk * kk;
        }
        g.coeffs[j] = std::exp(-e);
    }
    return g;
}

struct Cor54Side {
    double sigma0 = 0;
    double kernel = 0;
};

Cor54Side cor54_norms(const TorusSymbol& sigma, std::span<const PhaseSpec> phases, int cutoff) {
    const int d = sigma.dim;
    const int r = sigma.arity;
    if (d != 1 || r != 1)
        throw std::invalid_argument("check_cor54: implemented for d = 1, r = 1 at desk scale");

    // x-content of sigma0(., k) is bounded by |k| + spectral content of sigma;
    // sample on a safely resolving grid and read coefficients exactly
    const int lx = 2 * cutoff + 4;
    const int nx = 2 * lx + 2;
    const UniformGrid xg(1, nx, 0.5);

    const TorusSignal win1 = norm_window(1, 3);

    Cor54Side side;
    // sigma0 term: sum_k M^1_x(sigma0(., k))
    for (int k = -cutoff; k <= cutoff; ++k) {
        SampledField row({xg});
        for (int j = 0; j < nx; ++j) {
            const double x = xg.coord(j);
            const int kk[1] = {k};
            std::vector<double> z2{x, static_cast<double>(k)};
            const cplx v = sigma.eval(std::span<const double>(&x, 1), kk) *
                           std::polar(1.0, two_pi * phases[0].eval(z2));
            row.data[static_cast<std::size_t>(j)] = v;
        }
        const TorusSignal coeffs = torus_coefficients(row, lx);
        side.sigma0 += torus_modulation_norm(coeffs, win1, 1, 1, nx);
    }

    // kernel term: K-hat(l, j) = x-coefficient of sigma0(., -j) at l
    const int cut = std::max(lx, cutoff);
    TorusSignal K(2, cut);
    for (int k = -cutoff; k <= cutoff; ++k) {
        SampledField row({xg});
        for (int j = 0; j < nx; ++j) {
            const double x = xg.coord(j);
            const int kk[1] = {k};
            std::vector<double> z2{x, static_cast<double>(k)};
            row.data[static_cast<std::size_t>(j)] =
                sigma.eval(std::span<const double>(&x, 1), kk) *
                std::polar(1.0, two_pi * phases[0].eval(z2));
        }
        const TorusSignal coeffs = torus_coefficients(row, lx);
        for (int l = -lx; l <= lx; ++l) {
            const int idx2[2] = {l, -k};
            const int idx1[1] = {l};
            K.at(idx2) = coeffs.at(idx1);
        }
    }
    const TorusSignal win2 = norm_window(2, 3);
    side.kernel = torus_modulation_norm(K, win2, 1, 1, 2 * cut + 2);
    return side;
}

} // namespace

Cor54Report check_cor54(const TorusSymbol& sigma, std::span<const PhaseSpec> phases, int cutoff) {
    check_linear_phases(phases, sigma.dim);
    const Cor54Side small = cor54_norms(sigma, phases, cutoff);
    const Cor54Side big = cor54_norms(sigma, phases, 2 * cutoff);
    Cor54Report rep;
    rep.sigma0_norm = small.sigma0;
    rep.kernel_norm = small.kernel;
    rep.ratio = small.sigma0 > 0 ? small.kernel / small.sigma0 : 0.0;
    rep.sigma0_norm_big = big.sigma0;
    rep.kernel_norm_big = big.kernel;
    rep.ratio_big = big.sigma0 > 0 ? big.kernel / big.sigma0 : 0.0;
    return rep;
}

} // namespace tfio
