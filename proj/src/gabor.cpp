#include "tfio/gabor.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

#include "tfio/rng.hpp"

namespace tfio {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

std::size_t pow_sz(int base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
    return r;
}
} // namespace

GaborSystem::GaborSystem(SampledField g, double a, double b, int mr, int nr)
    : window(std::move(g)), alpha(a), beta(b), m_range(mr), n_range(nr) {
    if (window.blocks.size() != 1)
        throw std::invalid_argument("GaborSystem: window must be a single-block field");
    if (!window.finite() || l2_norm(window) == 0.0)
        throw std::invalid_argument("GaborSystem: window must be finite and nonzero");
    if (mr < 0 || nr < 0) throw std::invalid_argument("GaborSystem: negative truncation radius");
    const UniformGrid& gr = grid();
    const double h = gr.spacing();
    const double dxi = gr.dual().spacing();
    const double qa = alpha / h, qb = beta / dxi;
    time_step = static_cast<int>(std::lround(qa));
    freq_step = static_cast<int>(std::lround(qb));
    if (time_step < 1 || std::abs(qa - time_step) > 1e-9)
        throw std::invalid_argument("GaborSystem: alpha must be an integer multiple of the grid spacing");
    if (freq_step < 1 || std::abs(qb - freq_step) > 1e-9)
        throw std::invalid_argument("GaborSystem: beta must be an integer multiple of the dual spacing");
    if (freq_step * n_range > gr.points / 2)
        throw std::invalid_argument("GaborSystem: modulations exceed the resolved band");
}

std::size_t GaborSystem::lattice_count() const {
    return pow_sz(2 * m_range + 1, dim()) * pow_sz(2 * n_range + 1, dim());
}

SampledField gabor_atom(const GaborSystem& sys, std::span<const int> m, std::span<const int> n) {
    const int d = sys.dim();
    if (static_cast<int>(m.size()) != d || static_cast<int>(n.size()) != d)
        throw std::invalid_argument("gabor_atom: index dimension mismatch");
    TimeFrequencyShift s;
    s.translation.resize(static_cast<std::size_t>(d));
    s.modulation.resize(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a) {
        s.translation[static_cast<std::size_t>(a)] = sys.alpha * m[static_cast<std::size_t>(a)];
        s.modulation[static_cast<std::size_t>(a)] = sys.beta * n[static_cast<std::size_t>(a)];
    }
    return apply_shift(sys.window, s);
}

namespace {

// enumerate [-r, r]^d
struct BoxIter {
    int radius, dim;
    std::size_t count() const {
        std::size_t c = 1;
        for (int i = 0; i < dim; ++i) c *= static_cast<std::size_t>(2 * radius + 1);
        return c;
    }
    void decode(std::size_t flat, std::span<int> out) const {
        for (int a = dim - 1; a >= 0; --a) {
            out[a] = static_cast<int>(flat % static_cast<std::size_t>(2 * radius + 1)) - radius;
            flat /= static_cast<std::size_t>(2 * radius + 1);
        }
    }
};

} // namespace

CoefficientTensor analyze(const GaborSystem& sys, const SampledField& f) {
    if (f.blocks.size() != 1 || !(f.blocks[0] == sys.grid()))
        throw std::invalid_argument("analyze: signal grid does not match the system");
    const int d = sys.dim();
    const UniformGrid& gr = sys.grid();
    const auto shape = f.shape();
    const double cell = cell_measure(f.blocks);

    CoefficientTensor c(sys.alpha, sys.beta,
                        {CoeffIndex{"m", sys.m_range, d, false}, CoeffIndex{"n", sys.n_range, d, true}});
    const BoxIter mbox{sys.m_range, d}, nbox{sys.n_range, d};
    const std::size_t mc = mbox.count(), nc = nbox.count();

    #pragma omp parallel for schedule(static)
    for (long long mi = 0; mi < static_cast<long long>(mc); ++mi) {
        std::vector<int> m(static_cast<std::size_t>(d)), n(static_cast<std::size_t>(d)),
            src(static_cast<std::size_t>(d));
        mbox.decode(static_cast<std::size_t>(mi), m);
        // windowed product f(t) conj(g(t - alpha m)) restricted to the overlap
        std::vector<cplx> w(f.size(), cplx{0, 0});
        for (std::size_t j = 0; j < f.size(); ++j) {
            unflatten(j, shape, src);
            std::size_t gsrc = 0;
            bool in_range = true;
            for (int a = 0; a < d; ++a) {
                const long sj = src[static_cast<std::size_t>(a)] -
                                static_cast<long>(sys.time_step) * m[static_cast<std::size_t>(a)];
                if (sj < 0 || sj >= gr.points) { in_range = false; break; }
                gsrc = gsrc * static_cast<std::size_t>(gr.points) + static_cast<std::size_t>(sj);
            }
            if (in_range) w[j] = f.data[j] * std::conj(sys.window.data[gsrc]);
        }
        for (std::size_t ni = 0; ni < nc; ++ni) {
            nbox.decode(ni, n);
            cplx s{0, 0};
            for (std::size_t j = 0; j < f.size(); ++j) {
                if (w[j] == cplx{0, 0}) continue;
                unflatten(j, shape, src);
                double phase = 0;
                for (int a = 0; a < d; ++a)
                    phase += sys.beta * n[static_cast<std::size_t>(a)] * gr.coord(src[static_cast<std::size_t>(a)]);
                s += w[j] * std::polar(1.0, -two_pi * phase);
            }
            c.data[static_cast<std::size_t>(mi) * nc + ni] = s * cell;
        }
    }
    return c;
}

SampledField synthesize(const GaborSystem& sys, const CoefficientTensor& c) {
    const int d = sys.dim();
    if (c.indices.size() != 2 || c.indices[0].radius != sys.m_range ||
        c.indices[1].radius != sys.n_range || c.indices[0].dim != d)
        throw std::invalid_argument("synthesize: coefficient ranges do not match the system");
    const UniformGrid& gr = sys.grid();
    const auto shape = sys.window.shape();
    const BoxIter mbox{sys.m_range, d}, nbox{sys.n_range, d};
    const std::size_t mc = mbox.count(), nc = nbox.count();

    SampledField out(sys.window.blocks);
    #pragma omp parallel for schedule(static)
    for (long long jj = 0; jj < static_cast<long long>(out.size()); ++jj) {
        const std::size_t j = static_cast<std::size_t>(jj);
        std::vector<int> m(static_cast<std::size_t>(d)), n(static_cast<std::size_t>(d)),
            src(static_cast<std::size_t>(d));
        unflatten(j, shape, src);
        cplx acc{0, 0};
        for (std::size_t mi = 0; mi < mc; ++mi) {
            mbox.decode(mi, m);
            std::size_t gsrc = 0;
            bool in_range = true;
            for (int a = 0; a < d; ++a) {
                const long sj = src[static_cast<std::size_t>(a)] -
                                static_cast<long>(sys.time_step) * m[static_cast<std::size_t>(a)];
                if (sj < 0 || sj >= gr.points) { in_range = false; break; }
                gsrc = gsrc * static_cast<std::size_t>(gr.points) + static_cast<std::size_t>(sj);
            }
            if (!in_range) continue;
            const cplx gv = sys.window.data[gsrc];
            if (gv == cplx{0, 0}) continue;
            cplx ssum{0, 0};
            for (std::size_t ni = 0; ni < nc; ++ni) {
                nbox.decode(ni, n);
                double phase = 0;
                for (int a = 0; a < d; ++a)
                    phase += sys.beta * n[static_cast<std::size_t>(a)] * gr.coord(src[static_cast<std::size_t>(a)]);
                ssum += c.data[mi * nc + ni] * std::polar(1.0, two_pi * phase);
            }
            acc += gv * ssum;
        }
        out.data[j] = acc;
    }
    return out;
}

SampledField frame_operator(const GaborSystem& sys, const SampledField& f) {
    return synthesize(sys, analyze(sys, f));
}

namespace {

// Dense matrix of S in the grid basis: (S f)(t) = h^d sum_{t'} M(t,t') f(t').
// The modulation sum separates from the translation sum, M(t,t') =
// D(t - t') * sum_m g(t - alpha m) conj(g(t' - alpha m)).
Eigen::MatrixXcd frame_matrix(const GaborSystem& sys) {
    const int d = sys.dim();
    const UniformGrid& gr = sys.grid();
    const int n = gr.points;
    const std::size_t dim_total = pow_sz(n, d);
    const double h = gr.spacing();

    // 1-d Dirichlet factor per index difference
    std::vector<cplx> dirichlet(static_cast<std::size_t>(2 * n - 1));
    for (int delta = -(n - 1); delta <= n - 1; ++delta) {
        cplx s{0, 0};
        for (int k = -sys.n_range; k <= sys.n_range; ++k)
            s += std::polar(1.0, two_pi * sys.beta * k * delta * h);
        dirichlet[static_cast<std::size_t>(delta + n - 1)] = s;
    }

    const BoxIter mbox{sys.m_range, d};
    const std::size_t mc = mbox.count();
    std::vector<int> mshape(static_cast<std::size_t>(d), n);

    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim_total),
                                                static_cast<Eigen::Index>(dim_total));
    #pragma omp parallel for schedule(static)
    for (long long tt = 0; tt < static_cast<long long>(dim_total); ++tt) {
        const std::size_t t = static_cast<std::size_t>(tt);
        std::vector<int> ti(static_cast<std::size_t>(d)), tj(static_cast<std::size_t>(d)),
            m(static_cast<std::size_t>(d));
        unflatten(t, mshape, ti);
        for (std::size_t u = 0; u < dim_total; ++u) {
            unflatten(u, mshape, tj);
            cplx gsum{0, 0};
            for (std::size_t mi = 0; mi < mc; ++mi) {
                mbox.decode(mi, m);
                std::size_t a1 = 0, a2 = 0;
                bool ok = true;
                for (int a = 0; a < d; ++a) {
                    const long s1 = ti[static_cast<std::size_t>(a)] -
                                    static_cast<long>(sys.time_step) * m[static_cast<std::size_t>(a)];
                    const long s2 = tj[static_cast<std::size_t>(a)] -
                                    static_cast<long>(sys.time_step) * m[static_cast<std::size_t>(a)];
                    if (s1 < 0 || s1 >= n || s2 < 0 || s2 >= n) { ok = false; break; }
                    a1 = a1 * static_cast<std::size_t>(n) + static_cast<std::size_t>(s1);
                    a2 = a2 * static_cast<std::size_t>(n) + static_cast<std::size_t>(s2);
                }
                if (!ok) continue;
                gsum += sys.window.data[a1] * std::conj(sys.window.data[a2]);
            }
            cplx dprod{1, 0};
            for (int a = 0; a < d; ++a)
                dprod *= dirichlet[static_cast<std::size_t>(ti[static_cast<std::size_t>(a)] -
                                                            tj[static_cast<std::size_t>(a)] + n - 1)];
            M(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(u)) =
                gsum * dprod * std::pow(h, d);
        }
    }
    return M;
}

} // namespace

FrameBounds frame_bounds_dense(const GaborSystem& sys) {
    Eigen::MatrixXcd M = frame_matrix(sys);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    return FrameBounds{ev(0), ev(ev.size() - 1)};
}

FrameBounds frame_bounds_rayleigh(const GaborSystem& sys, int trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("frame_bounds_rayleigh: trials >= 1");
    FrameBounds b{INFINITY, 0.0};
    for (int t = 0; t < trials; ++t) {
        Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(t));
        SampledField f(sys.window.blocks);
        for (auto& z : f.data) z = rng.complex_gaussian();
        const SampledField Sf = frame_operator(sys, f);
        const double q = std::real(inner(Sf, f)) / std::real(inner(f, f));
        b.lower = std::min(b.lower, q);
        b.upper = std::max(b.upper, q);
    }
    return b;
}

FrameBounds frame_bounds_zak(const GaborSystem& sys, int omega_samples) {
    if (sys.dim() != 1) throw std::invalid_argument("frame_bounds_zak: d = 1 only");
    if (sys.time_step * sys.freq_step != sys.grid().points)
        throw std::invalid_argument("frame_bounds_zak: requires alpha beta = 1");
    if (omega_samples < 2 || omega_samples % 2 != 0)
        throw std::invalid_argument("frame_bounds_zak: omega_samples must be even");
    const UniformGrid& gr = sys.grid();
    const double a = sys.alpha;
    FrameBounds b{INFINITY, 0.0};
    // Zg(x, w) = sum_k g(x - k a) e^{2 pi i k a w}, x in [0, a), w in [0, 1/a)
    for (int j = 0; j < sys.time_step; ++j) {
        const double x = j * gr.spacing();
        for (int wq = 0; wq < omega_samples; ++wq) {
            const double w = (1.0 / a) * wq / omega_samples;
            cplx z{0, 0};
            for (int k = -gr.points; k <= gr.points; ++k) {
                const auto idx = gr.index_of(x - k * a);
                if (!idx) continue;
                z += sys.window.data[static_cast<std::size_t>(*idx)] *
                     std::polar(1.0, two_pi * k * a * w);
            }
            const double m = std::norm(z);
            b.lower = std::min(b.lower, m);
            b.upper = std::max(b.upper, m);
        }
    }
    return b;
}

SampledField dual_window(const GaborSystem& sys, double tol, int max_iter) {
    if (!(tol > 0) || max_iter < 1) throw std::invalid_argument("dual_window: bad tolerance/iteration cap");
    const SampledField& g = sys.window;

    SampledField x(g.blocks);
    SampledField r = g;
    SampledField p = r;
    double rho = std::real(inner(r, r));
    const double target = tol;

    for (int it = 0; it < max_iter; ++it) {
        const SampledField Ap = frame_operator(sys, p);
        const double pap = std::real(inner(Ap, p));
        if (!(pap > 0) || !std::isfinite(pap))
            throw FrameError("dual_window: frame operator lost positivity (lower bound ~ 0)");
        const double step = rho / pap;
        for (std::size_t j = 0; j < x.size(); ++j) {
            x.data[j] += step * p.data[j];
            r.data[j] -= step * Ap.data[j];
        }
        const double rho_next = std::real(inner(r, r));
        if (std::sqrt(rho_next) <= target) {
            // confirm with the true residual
            SampledField res = frame_operator(sys, x);
            for (std::size_t j = 0; j < res.size(); ++j) res.data[j] -= g.data[j];
            if (l2_norm(res) <= target) return x;
        }
        const double beta = rho_next / rho;
        for (std::size_t j = 0; j < p.size(); ++j) p.data[j] = r.data[j] + beta * p.data[j];
        rho = rho_next;
    }
    throw FrameError("dual_window: conjugate gradients did not converge (not a frame at this truncation?)");
}

GaborSystem tighten(const GaborSystem& sys) {
    // integer-density systems can be invertible at a finite truncation while
    // the lattice they approximate carries no frame; the Zak bound sees that
    if (sys.dim() == 1 && sys.time_step * sys.freq_step == sys.grid().points) {
        const FrameBounds zb = frame_bounds_zak(sys);
        if (zb.lower < 1e-8 * zb.upper)
            throw FrameError("tighten: lattice at critical density has a vanishing lower bound");
    }
    const std::size_t dim_total = sys.window.size();
    Eigen::MatrixXcd M = frame_matrix(sys);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M);
    const auto& ev = es.eigenvalues();
    const double lo = ev(0), hi = ev(ev.size() - 1);
    if (!(lo > 0) || lo < 1e-10 * hi)
        throw FrameError("tighten: lower frame bound vanishes at this truncation");

    Eigen::VectorXcd gv(static_cast<Eigen::Index>(dim_total));
    for (std::size_t j = 0; j < dim_total; ++j) gv(static_cast<Eigen::Index>(j)) = sys.window.data[j];
    Eigen::VectorXcd y = es.eigenvectors().adjoint() * gv;
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) /= std::sqrt(ev(i));
    Eigen::VectorXcd w = es.eigenvectors() * y;

    SampledField tight(sys.window.blocks);
    for (std::size_t j = 0; j < dim_total; ++j) tight.data[j] = w(static_cast<Eigen::Index>(j));
    return GaborSystem(std::move(tight), sys.alpha, sys.beta, sys.m_range, sys.n_range);
}

} // namespace tfio
