#include "tfio/fio.hpp"

#include "tfio/fft.hpp"

#include <cmath>
#include <numbers>

namespace tfio {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
} // namespace

FioProblem::FioProblem(SymbolSpec s, std::vector<PhaseSpec> ph, const UniformGrid& xg)
    : symbol(std::move(s)), phases(std::move(ph)), x_grid(xg) {
    if (static_cast<int>(phases.size()) != symbol.arity)
        throw std::invalid_argument("FioProblem: one phase per analyzed argument");
    for (const auto& p : phases) {
        if (p.var_count != 2 || p.dim != symbol.dim)
            throw std::invalid_argument("FioProblem: phases must be 2-block with matching dimension");
        if (!p.gradient) throw std::invalid_argument("FioProblem: phases need analytic gradients");
    }
    if (x_grid.dim != symbol.dim) throw std::invalid_argument("FioProblem: grid dimension mismatch");
    xi_grids.assign(static_cast<std::size_t>(symbol.arity), x_grid.dual());
}

double FioProblem::joint_phase(std::span<const double> z) const {
    const int d = symbol.dim;
    std::vector<double> zi(static_cast<std::size_t>(2 * d));
    double s = 0;
    for (int k = 0; k < arity(); ++k) {
        for (int a = 0; a < d; ++a) {
            zi[static_cast<std::size_t>(a)] = z[static_cast<std::size_t>(a)];
            zi[static_cast<std::size_t>(d + a)] = z[static_cast<std::size_t>((k + 1) * d + a)];
        }
        s += phases[static_cast<std::size_t>(k)].eval(zi);
    }
    return s;
}

void FioProblem::joint_phase_gradient(std::span<const double> z, std::span<double> g) const {
    const int d = symbol.dim;
    std::fill(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(z.size()), 0.0);
    std::vector<double> zi(static_cast<std::size_t>(2 * d)), gi(static_cast<std::size_t>(2 * d));
    for (int k = 0; k < arity(); ++k) {
        for (int a = 0; a < d; ++a) {
            zi[static_cast<std::size_t>(a)] = z[static_cast<std::size_t>(a)];
            zi[static_cast<std::size_t>(d + a)] = z[static_cast<std::size_t>((k + 1) * d + a)];
        }
        phases[static_cast<std::size_t>(k)].gradient(zi, gi);
        for (int a = 0; a < d; ++a) {
            g[static_cast<std::size_t>(a)] += gi[static_cast<std::size_t>(a)];
            g[static_cast<std::size_t>((k + 1) * d + a)] += gi[static_cast<std::size_t>(d + a)];
        }
    }
}

FioOperator::FioOperator(FioProblem p) : prob_(std::move(p)) {
    std::vector<UniformGrid> blocks;
    blocks.push_back(prob_.x_grid);
    for (const auto& g : prob_.xi_grids) blocks.push_back(g);
    weight_ = SampledField(blocks);

    const auto shape = weight_.shape();
    const int nc = prob_.symbol.coord_count();
    #pragma omp parallel for schedule(static)
    for (long long jj = 0; jj < static_cast<long long>(weight_.size()); ++jj) {
        const std::size_t j = static_cast<std::size_t>(jj);
        std::vector<double> z(static_cast<std::size_t>(nc));
        coords_of(weight_, j, z);
        const cplx sv = prob_.symbol.eval(z);
        weight_.data[j] = sv * std::polar(1.0, two_pi * prob_.joint_phase(z));
    }
    if (!weight_.finite())
        throw std::runtime_error("FioOperator: oscillatory weight has non-finite samples");
}

namespace {

// out(x) = measure * sum_tail W[x, tail] * prod_k inputs[k][tail_k]
SampledField contract_tail(const SampledField& w, std::span<const SampledField> inputs,
                           double measure, const UniformGrid& out_grid) {
    const int r = static_cast<int>(inputs.size());
    std::vector<std::size_t> counts(static_cast<std::size_t>(r));
    std::size_t tail = 1;
    for (int k = 0; k < r; ++k) {
        counts[static_cast<std::size_t>(k)] = inputs[static_cast<std::size_t>(k)].size();
        tail *= counts[static_cast<std::size_t>(k)];
    }
    std::vector<std::size_t> divisors(static_cast<std::size_t>(r), 1);
    for (int k = r - 2; k >= 0; --k)
        divisors[static_cast<std::size_t>(k)] =
            divisors[static_cast<std::size_t>(k + 1)] * counts[static_cast<std::size_t>(k + 1)];

    SampledField out({out_grid});
    const std::size_t xcount = out.size();

    #pragma omp parallel for schedule(static)
    for (long long xi = 0; xi < static_cast<long long>(xcount); ++xi) {
        const std::size_t x = static_cast<std::size_t>(xi);
        const cplx* wrow = w.data.data() + x * tail;
        cplx acc{0, 0};
        for (std::size_t t = 0; t < tail; ++t) {
            cplx prod = wrow[t];
            std::size_t rem = t;
            for (int k = 0; k < r; ++k) {
                const std::size_t ik = rem / divisors[static_cast<std::size_t>(k)];
                rem %= divisors[static_cast<std::size_t>(k)];
                prod *= inputs[static_cast<std::size_t>(k)].data[ik];
            }
            acc += prod;
        }
        out.data[x] = acc * measure;
    }
    return out;
}

} // namespace

SampledField FioOperator::apply(std::span<const SampledField> inputs) const {
    const int r = prob_.arity();
    if (static_cast<int>(inputs.size()) != r)
        throw std::invalid_argument("fio_apply: arity mismatch");
    std::vector<SampledField> hats;
    hats.reserve(static_cast<std::size_t>(r));
    double measure = 1.0;
    for (int k = 0; k < r; ++k) {
        const auto& f = inputs[static_cast<std::size_t>(k)];
        if (f.blocks.size() != 1 || !(f.blocks[0] == prob_.x_grid))
            throw std::invalid_argument("fio_apply: inputs must live on the problem grid");
        hats.push_back(dft(f, -1));
        if (!(hats.back().blocks[0] == prob_.xi_grids[static_cast<std::size_t>(k)]))
            throw std::invalid_argument("fio_apply: frequency grid mismatch");
        measure *= std::pow(prob_.xi_grids[static_cast<std::size_t>(k)].spacing(),
                            prob_.xi_grids[static_cast<std::size_t>(k)].dim);
    }
    return contract_tail(weight_, hats, measure, prob_.x_grid);
}

SampledField fio_apply(const FioProblem& p, std::span<const SampledField> inputs) {
    bool separable = p.symbol.x_only;
    for (const auto& ph : p.phases) separable = separable && ph.standard_linear;
    if (separable) {
        // sum collapses to sigma(x) * prod_i (inverse transform of f_i hat)
        const int r = p.arity();
        if (static_cast<int>(inputs.size()) != r)
            throw std::invalid_argument("fio_apply: arity mismatch");
        SampledField out({p.x_grid});
        const int nc = p.symbol.coord_count();
        #pragma omp parallel for schedule(static)
        for (long long jj = 0; jj < static_cast<long long>(out.size()); ++jj) {
            const std::size_t j = static_cast<std::size_t>(jj);
            std::vector<double> z(static_cast<std::size_t>(nc), 0.0);
            coords_of(out, j, std::span<double>(z.data(), static_cast<std::size_t>(p.x_grid.dim)));
            cplx v = p.symbol.eval(z);
            for (int k = 0; k < r; ++k) {
                const auto& f = inputs[static_cast<std::size_t>(k)];
                if (f.size() != out.size())
                    throw std::invalid_argument("fio_apply: inputs must live on the problem grid");
                v *= f.data[j];
            }
            out.data[j] = v;
        }
        return out;
    }
    return FioOperator(p).apply(inputs);
}

SampledField pdo_apply(const SymbolSpec& sigma, const SampledField& f, const SampledField& g) {
    if (sigma.arity != 2) throw std::invalid_argument("pdo_apply: bilinear symbols only");
    if (f.blocks.size() != 1 || g.blocks.size() != 1 || !(f.blocks[0] == g.blocks[0]))
        throw std::invalid_argument("pdo_apply: inputs must share one grid");
    FioProblem p(sigma, {phase_linear(sigma.dim), phase_linear(sigma.dim)}, f.blocks[0]);
    const SampledField in[2] = {f, g};
    return FioOperator(std::move(p)).apply(in);
}

KernelField kernel_from_symbol(const FioProblem& p) {
    FioOperator op(p);
    std::set<int> freq_blocks;
    for (int k = 1; k <= p.arity(); ++k) freq_blocks.insert(k);
    return KernelField{dft(op.weight(), freq_blocks, -1)};
}

SampledField bk_apply(const KernelField& k, std::span<const SampledField> inputs) {
    const int r = k.arity();
    if (static_cast<int>(inputs.size()) != r) throw std::invalid_argument("bk_apply: arity mismatch");
    double measure = 1.0;
    for (int i = 0; i < r; ++i) {
        const auto& f = inputs[static_cast<std::size_t>(i)];
        if (f.blocks.size() != 1 || !(f.blocks[0] == k.data.blocks[static_cast<std::size_t>(i + 1)]))
            throw std::invalid_argument("bk_apply: input grid does not match the kernel block");
        measure *= std::pow(f.blocks[0].spacing(), f.blocks[0].dim);
    }
    return contract_tail(k.data, inputs, measure, k.data.blocks[0]);
}

namespace {

struct ScanPlan {
    int d = 1, r = 1;
    int n = 0;            // grid points per axis
    int tstep = 1, fstep = 1;
    int m_range = 0, n_range = 0;      // input pairs
    int out_m_range = 0, out_n_range = 0; // test-atom pair
    std::size_t tuple_count = 0;
    std::size_t fiber_count = 0;
    std::vector<int> tshape; // per-axis translation sides, slot 0 first
    std::vector<int> fshape;

    int t_radius(int axis) const { return axis < d ? out_m_range : m_range; }
    int f_radius(int axis) const { return axis < d ? out_n_range : n_range; }
};

ScanPlan make_plan(const KernelField& k, const GaborSystem& sys, int out_m, int out_n) {
    ScanPlan pl;
    pl.d = sys.dim();
    pl.r = k.arity();
    pl.n = sys.grid().points;
    pl.tstep = sys.time_step;
    pl.fstep = sys.freq_step;
    pl.m_range = sys.m_range;
    pl.n_range = sys.n_range;
    pl.out_m_range = out_m < 0 ? sys.m_range : out_m;
    pl.out_n_range = out_n < 0 ? sys.n_range : out_n;
    if (pl.fstep * pl.out_n_range > pl.n / 2)
        throw std::invalid_argument("gabor_matrix: output modulations exceed the resolved band");
    for (const auto& b : k.data.blocks)
        if (!(b == sys.grid()))
            throw std::invalid_argument("gabor_matrix: kernel blocks must live on the system grid");
    const int axes = pl.d * (pl.r + 1);
    pl.tuple_count = 1;
    pl.fiber_count = 1;
    for (int a = 0; a < axes; ++a) {
        pl.tshape.push_back(2 * pl.t_radius(a) + 1);
        pl.fshape.push_back(2 * pl.f_radius(a) + 1);
        pl.tuple_count *= static_cast<std::size_t>(pl.tshape.back());
        pl.fiber_count *= static_cast<std::size_t>(pl.fshape.back());
    }
    return pl;
}

} // namespace

void gabor_matrix_scan(
    const KernelField& k, const GaborSystem& sys,
    const std::function<void(std::span<const int>, std::span<const cplx>)>& visit,
    int out_m_range, int out_n_range) {
    const ScanPlan pl = make_plan(k, sys, out_m_range, out_n_range);
    const int axes = pl.d * (pl.r + 1);
    const auto kshape = k.data.shape();
    const std::size_t total = k.data.size();
    const SampledField& g = sys.window;

    std::vector<int> trans(static_cast<std::size_t>(axes));

    // pruned transform: only the modulation bins b_n = N/2 + fs*n are ever
    // read, and there e^{s 2pi i j b_n / N} = (-1)^j e^{s 2pi i j fs n / N},
    // which cancels the checkerboard of the offset correction. Tables are
    // per axis: value[n][j] with the h * P0 * (-1)^{N/2 + fs n} factor folded
    // into the n-th row.
    const double h = sys.grid().spacing();
    std::vector<std::vector<std::vector<cplx>>> tables(static_cast<std::size_t>(axes));
    for (int a = 0; a < axes; ++a) {
        const int sign = a < pl.d ? -1 : 1;
        const int ra = pl.f_radius(a);
        const cplx p0 = [&] {
            switch (((pl.n % 4) + 4) % 4) {
                case 0: return cplx{1, 0};
                case 1: return sign < 0 ? cplx{0, -1} : cplx{0, 1};
                case 2: return cplx{-1, 0};
                default: return sign < 0 ? cplx{0, 1} : cplx{0, -1};
            }
        }();
        auto& tab = tables[static_cast<std::size_t>(a)];
        tab.assign(static_cast<std::size_t>(2 * ra + 1),
                   std::vector<cplx>(static_cast<std::size_t>(pl.n)));
        for (int nn = -ra; nn <= ra; ++nn) {
            const double sgn_bin = ((pl.n / 2 + pl.fstep * nn) % 2 == 0) ? 1.0 : -1.0;
            const cplx scale = h * p0 * sgn_bin;
            for (int j = 0; j < pl.n; ++j)
                tab[static_cast<std::size_t>(nn + ra)][static_cast<std::size_t>(j)] =
                    scale * std::polar(1.0, sign * 2.0 * std::numbers::pi * j * pl.fstep * nn /
                                                static_cast<double>(pl.n));
        }
    }

    std::vector<cplx> fiber(pl.fiber_count);

    // numerical support of the window: translates multiply the kernel, so
    // samples below 1e-14 of the peak cannot move any fiber value
    int wlo = pl.n, whi = -1;
    {
        double peak = 0;
        for (const auto& z : g.data) peak = std::max(peak, std::abs(z));
        for (int j = 0; j < pl.n && pl.d == 1; ++j)
            if (std::abs(g.data[static_cast<std::size_t>(j)]) > 1e-14 * peak) {
                wlo = std::min(wlo, j);
                whi = std::max(whi, j);
            }
    }
    const bool fast_r2 = pl.r == 2 && pl.d == 1 && whi >= wlo;

    for (std::size_t tflat = 0; tflat < pl.tuple_count; ++tflat) {
        unflatten(tflat, pl.tshape, trans);
        for (int a = 0; a < axes; ++a) trans[static_cast<std::size_t>(a)] -= pl.t_radius(a);

        if (fast_r2) {
            // windowed product and partial reduction restricted to the
            // support boxes of the three translates
            int lo[3], hi[3];
            bool empty = false;
            for (int a = 0; a < 3; ++a) {
                lo[a] = std::max(0, wlo + pl.tstep * trans[static_cast<std::size_t>(a)]);
                hi[a] = std::min(pl.n - 1, whi + pl.tstep * trans[static_cast<std::size_t>(a)]);
                empty = empty || lo[a] > hi[a];
            }
            if (empty) {
                std::fill(fiber.begin(), fiber.end(), cplx{0, 0});
                visit(trans, fiber);
                continue;
            }
            const int b0 = hi[0] - lo[0] + 1, b1 = hi[1] - lo[1] + 1, b2 = hi[2] - lo[2] + 1;
            const int s0 = pl.fshape[0], s1 = pl.fshape[1], s2 = pl.fshape[2];
            const long sh0 = static_cast<long>(pl.tstep) * trans[0];
            const long sh1 = static_cast<long>(pl.tstep) * trans[1];
            const long sh2 = static_cast<long>(pl.tstep) * trans[2];

            std::vector<cplx> A(static_cast<std::size_t>(b0 * b1 * b2));
            #pragma omp parallel for schedule(static)
            for (long long jj0 = 0; jj0 < b0; ++jj0) {
                const int j0 = lo[0] + static_cast<int>(jj0);
                const cplx w0 = std::conj(g.data[static_cast<std::size_t>(j0 - sh0)]);
                for (int j1 = lo[1]; j1 <= hi[1]; ++j1) {
                    const cplx w01 = w0 * g.data[static_cast<std::size_t>(j1 - sh1)];
                    const cplx* krow =
                        k.data.data.data() +
                        (static_cast<std::size_t>(j0) * static_cast<std::size_t>(pl.n) +
                         static_cast<std::size_t>(j1)) *
                            static_cast<std::size_t>(pl.n);
                    cplx* arow = A.data() + (static_cast<std::size_t>(jj0) * b1 +
                                             static_cast<std::size_t>(j1 - lo[1])) *
                                                static_cast<std::size_t>(b2);
                    for (int j2 = lo[2]; j2 <= hi[2]; ++j2)
                        arow[j2 - lo[2]] = krow[j2] * w01 * g.data[static_cast<std::size_t>(j2 - sh2)];
                }
            }

            // axis 2 (sign +1), then axis 1 (sign +1), then axis 0 (sign -1)
            std::vector<cplx> T2(static_cast<std::size_t>(b0 * b1 * s2));
            #pragma omp parallel for schedule(static)
            for (long long pq = 0; pq < static_cast<long long>(b0) * b1; ++pq) {
                const cplx* src = A.data() + static_cast<std::size_t>(pq) * b2;
                cplx* dst = T2.data() + static_cast<std::size_t>(pq) * s2;
                for (int nn = 0; nn < s2; ++nn) {
                    const cplx* row = tables[2][static_cast<std::size_t>(nn)].data() + lo[2];
                    cplx acc{0, 0};
                    for (int j = 0; j < b2; ++j) acc += src[j] * row[j];
                    dst[nn] = acc;
                }
            }
            std::vector<cplx> T1(static_cast<std::size_t>(b0 * s1 * s2));
            #pragma omp parallel for schedule(static)
            for (long long j0 = 0; j0 < b0; ++j0) {
                for (int nn = 0; nn < s1; ++nn) {
                    const cplx* row = tables[1][static_cast<std::size_t>(nn)].data() + lo[1];
                    for (int q = 0; q < s2; ++q) {
                        cplx acc{0, 0};
                        for (int j = 0; j < b1; ++j)
                            acc += T2[(static_cast<std::size_t>(j0) * b1 + static_cast<std::size_t>(j)) * s2 +
                                      static_cast<std::size_t>(q)] *
                                   row[j];
                        T1[(static_cast<std::size_t>(j0) * s1 + static_cast<std::size_t>(nn)) * s2 +
                           static_cast<std::size_t>(q)] = acc;
                    }
                }
            }
            #pragma omp parallel for schedule(static)
            for (long long nn = 0; nn < s0; ++nn) {
                const cplx* row = tables[0][static_cast<std::size_t>(nn)].data() + lo[0];
                for (int q = 0; q < s1 * s2; ++q) {
                    cplx acc{0, 0};
                    for (int j = 0; j < b0; ++j)
                        acc += T1[static_cast<std::size_t>(j) * (s1 * s2) + static_cast<std::size_t>(q)] * row[j];
                    fiber[static_cast<std::size_t>(nn) * (s1 * s2) + static_cast<std::size_t>(q)] = acc;
                }
            }
            visit(trans, fiber);
            continue;
        }

        // windowed kernel: K * conj(T_{alpha t0} g) (x) * prod T_{alpha t_b} g (y_b)
        SampledField w(k.data.blocks); // data re-created per tuple (moved out below)
        #pragma omp parallel for schedule(static)
        for (long long jj = 0; jj < static_cast<long long>(total); ++jj) {
            const std::size_t j = static_cast<std::size_t>(jj);
            std::vector<int> src(static_cast<std::size_t>(axes));
            unflatten(j, kshape, src);
            cplx factor{1, 0};
            bool alive = true;
            for (int b = 0; b <= pl.r && alive; ++b) {
                std::size_t goff = 0;
                for (int a = 0; a < pl.d; ++a) {
                    const int axis = b * pl.d + a;
                    const long sj = src[static_cast<std::size_t>(axis)] -
                                    static_cast<long>(pl.tstep) * trans[static_cast<std::size_t>(axis)];
                    if (sj < 0 || sj >= pl.n) { alive = false; break; }
                    goff = goff * static_cast<std::size_t>(pl.n) + static_cast<std::size_t>(sj);
                }
                if (!alive) break;
                factor *= (b == 0) ? std::conj(g.data[goff]) : g.data[goff];
            }
            if (alive) w.data[j] = k.data.data[j] * factor;
        }

        // axis-by-axis partial reduction onto the modulation boxes
        std::vector<cplx> cur = std::move(w.data);
        std::vector<std::size_t> shape(static_cast<std::size_t>(axes), static_cast<std::size_t>(pl.n));
        for (int a = 0; a < axes; ++a) {
            const int side = pl.fshape[static_cast<std::size_t>(a)];
            std::size_t pre = 1, post = 1;
            for (int i = 0; i < a; ++i) pre *= shape[static_cast<std::size_t>(i)];
            for (int i = a + 1; i < axes; ++i) post *= shape[static_cast<std::size_t>(i)];
            std::vector<cplx> next(pre * static_cast<std::size_t>(side) * post);
            const auto& tab = tables[static_cast<std::size_t>(a)];
            #pragma omp parallel for schedule(static)
            for (long long pp = 0; pp < static_cast<long long>(pre); ++pp) {
                const std::size_t p = static_cast<std::size_t>(pp);
                for (int nn = 0; nn < side; ++nn) {
                    const cplx* row = tab[static_cast<std::size_t>(nn)].data();
                    for (std::size_t q = 0; q < post; ++q) {
                        cplx acc{0, 0};
                        const cplx* src = cur.data() + (p * static_cast<std::size_t>(pl.n)) * post + q;
                        for (int j = 0; j < pl.n; ++j)
                            acc += src[static_cast<std::size_t>(j) * post] * row[j];
                        next[(p * static_cast<std::size_t>(side) + static_cast<std::size_t>(nn)) * post + q] = acc;
                    }
                }
            }
            cur = std::move(next);
            shape[static_cast<std::size_t>(a)] = static_cast<std::size_t>(side);
        }
        std::copy(cur.begin(), cur.end(), fiber.begin());
        visit(trans, fiber);
    }
}

namespace {

std::vector<CoeffIndex> matrix_indices(int r, int d, int m_range, int n_range, int out_m,
                                        int out_n) {
    std::vector<CoeffIndex> idx;
    idx.push_back({"m'", out_m, d, false});
    idx.push_back({"n'", out_n, d, true});
    for (int k = 1; k <= r; ++k) {
        const std::string suffix = k == 1 ? "" : std::to_string(k - 2);
        idx.push_back({"m" + suffix, m_range, d, false});
        idx.push_back({"n" + suffix, n_range, d, true});
    }
    return idx;
}

} // namespace

CoefficientTensor gabor_matrix(const KernelField& k, const GaborSystem& sys, int out_m_range,
                               int out_n_range) {
    const ScanPlan pl = make_plan(k, sys, out_m_range, out_n_range);
    CoefficientTensor out(sys.alpha, sys.beta,
                          matrix_indices(pl.r, pl.d, pl.m_range, pl.n_range, pl.out_m_range,
                                         pl.out_n_range));

    const int axes = pl.d * (pl.r + 1);
    std::vector<int> entry(static_cast<std::size_t>(2 * axes));
    std::vector<int> fidx(static_cast<std::size_t>(axes));
    gabor_matrix_scan(
        k, sys,
        [&](std::span<const int> trans, std::span<const cplx> fiber) {
            for (std::size_t ff = 0; ff < fiber.size(); ++ff) {
                unflatten(ff, pl.fshape, fidx);
                // interleave (m_b, n_b) group order expected by the tensor
                for (int b = 0; b <= pl.r; ++b)
                    for (int a = 0; a < pl.d; ++a) {
                        entry[static_cast<std::size_t>((2 * b) * pl.d + a)] =
                            trans[static_cast<std::size_t>(b * pl.d + a)];
                        entry[static_cast<std::size_t>((2 * b + 1) * pl.d + a)] =
                            fidx[static_cast<std::size_t>(b * pl.d + a)] -
                            pl.f_radius(b * pl.d + a);
                    }
                out.data[out.offset(entry)] = fiber[ff];
            }
        },
        out_m_range, out_n_range);
    return out;
}

CoefficientTensor gabor_matrix(const FioProblem& p, const GaborSystem& sys, int out_m_range,
                               int out_n_range) {
    return gabor_matrix(kernel_from_symbol(p), sys, out_m_range, out_n_range);
}

CoefficientTensor matrix_apply(const CoefficientTensor& a,
                               std::span<const CoefficientTensor> coefficients) {
    const std::size_t r = coefficients.size();
    if (a.indices.size() != 2 * (r + 1))
        throw std::invalid_argument("matrix_apply: matrix group count does not match the arity");
    for (std::size_t k = 0; k < r; ++k) {
        const auto& c = coefficients[k];
        if (c.indices.size() != 2 ||
            c.indices[0].radius != a.indices[2 * k + 2].radius ||
            c.indices[1].radius != a.indices[2 * k + 3].radius ||
            c.indices[0].dim != a.indices[2 * k + 2].dim)
            throw std::invalid_argument("matrix_apply: coefficient ranges do not match the matrix");
    }

    CoefficientTensor out(a.alpha, a.beta, {a.indices[0], a.indices[1]});
    const std::size_t head = a.indices[0].count() * a.indices[1].count();
    std::size_t tail = 1;
    std::vector<std::size_t> pair_counts(r);
    for (std::size_t k = 0; k < r; ++k) {
        pair_counts[k] = coefficients[k].size();
        tail *= pair_counts[k];
    }
    std::vector<std::size_t> divisors(r, 1);
    for (int k = static_cast<int>(r) - 2; k >= 0; --k)
        divisors[static_cast<std::size_t>(k)] =
            divisors[static_cast<std::size_t>(k + 1)] * pair_counts[static_cast<std::size_t>(k + 1)];

    #pragma omp parallel for schedule(static)
    for (long long hh = 0; hh < static_cast<long long>(head); ++hh) {
        const std::size_t hidx = static_cast<std::size_t>(hh);
        const cplx* row = a.data.data() + hidx * tail;
        cplx acc{0, 0};
        for (std::size_t t = 0; t < tail; ++t) {
            cplx prod = row[t];
            std::size_t rem = t;
            for (std::size_t k = 0; k < r; ++k) {
                const std::size_t ik = rem / divisors[k];
                rem %= divisors[k];
                prod *= coefficients[k].data[ik];
            }
            acc += prod;
        }
        out.data[hidx] = acc;
    }
    return out;
}

double weighted_l1(const CoefficientTensor& a, const WeightSpec& w) {
    int coords = 0;
    for (const auto& g : a.indices) coords += g.dim;
    if (w.dim() != coords) throw std::invalid_argument("weighted_l1: weight dimension mismatch");
    std::vector<int> idx(static_cast<std::size_t>(coords));
    std::vector<double> pt(static_cast<std::size_t>(coords));
    double s = 0;
    for (std::size_t f = 0; f < a.size(); ++f) {
        a.decode(f, idx);
        std::size_t axis = 0;
        for (const auto& g : a.indices)
            for (int i = 0; i < g.dim; ++i, ++axis)
                pt[axis] = a.coordinate(g, idx[axis]);
        s += std::abs(a.data[f]) * w.eval(pt);
    }
    return s;
}

} // namespace tfio
