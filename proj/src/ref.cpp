#include "tfio/ref.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

namespace tfio::ref {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

SampledField dft_direct(const SampledField& f, const std::set<int>& blocks, int sign) {
    SampledField cur = f;
    for (int b : blocks) {
        if (b < 0 || b >= static_cast<int>(cur.blocks.size()))
            throw std::out_of_range("dft_direct: block index out of range");
        int axis0 = 0;
        for (int i = 0; i < b; ++i) axis0 += cur.blocks[static_cast<std::size_t>(i)].dim;
        const UniformGrid g = cur.blocks[static_cast<std::size_t>(b)];
        const UniformGrid dual = g.dual();
        const double h = g.spacing();
        for (int a = 0; a < g.dim; ++a) {
            const int axis = axis0 + a;
            const auto shape = cur.shape();
            const auto strides = strides_of(shape);
            const int n = shape[static_cast<std::size_t>(axis)];
            const std::size_t stride = strides[static_cast<std::size_t>(axis)];
            const std::size_t fibers = cur.size() / static_cast<std::size_t>(n);
            std::vector<cplx> buf(static_cast<std::size_t>(n));
            for (std::size_t fi = 0; fi < fibers; ++fi) {
                const std::size_t base = (fi / stride) * (stride * static_cast<std::size_t>(n)) +
                                         (fi % stride);
                for (int k = 0; k < n; ++k) {
                    cplx s{0, 0};
                    for (int j = 0; j < n; ++j)
                        s += cur.data[base + static_cast<std::size_t>(j) * stride] *
                             std::polar(1.0, sign * two_pi * g.coord(j) * dual.coord(k));
                    buf[static_cast<std::size_t>(k)] = s * h;
                }
                for (int k = 0; k < n; ++k)
                    cur.data[base + static_cast<std::size_t>(k) * stride] = buf[static_cast<std::size_t>(k)];
            }
        }
        cur.blocks[static_cast<std::size_t>(b)] = dual;
    }
    return cur;
}

cplx stft_quadrature(const PointFn& f, const PointFn& g, std::span<const double> x,
                     std::span<const double> xi, int n_axes, int points, double half_width) {
    const UniformGrid grid(1, points, half_width);
    std::vector<int> shape(static_cast<std::size_t>(n_axes), points);
    std::size_t total = 1;
    for (int a = 0; a < n_axes; ++a) total *= static_cast<std::size_t>(points);
    std::vector<int> idx(static_cast<std::size_t>(n_axes));
    std::vector<double> t(static_cast<std::size_t>(n_axes)), tx(static_cast<std::size_t>(n_axes));
    cplx acc{0, 0};
    for (std::size_t j = 0; j < total; ++j) {
        unflatten(j, shape, idx);
        double phase = 0;
        for (int a = 0; a < n_axes; ++a) {
            t[static_cast<std::size_t>(a)] = grid.coord(idx[static_cast<std::size_t>(a)]);
            tx[static_cast<std::size_t>(a)] = t[static_cast<std::size_t>(a)] - x[static_cast<std::size_t>(a)];
            phase += xi[static_cast<std::size_t>(a)] * t[static_cast<std::size_t>(a)];
        }
        acc += f(t) * std::conj(g(tx)) * std::polar(1.0, -two_pi * phase);
    }
    return acc * std::pow(grid.spacing(), n_axes);
}

SampledField bk_apply_loops(const KernelField& k, std::span<const SampledField> inputs) {
    const int r = k.arity();
    if (static_cast<int>(inputs.size()) != r)
        throw std::invalid_argument("bk_apply_loops: arity mismatch");
    double measure = 1.0;
    std::vector<std::size_t> counts(static_cast<std::size_t>(r));
    std::size_t tail = 1;
    for (int i = 0; i < r; ++i) {
        counts[static_cast<std::size_t>(i)] = inputs[static_cast<std::size_t>(i)].size();
        tail *= counts[static_cast<std::size_t>(i)];
        measure *= std::pow(inputs[static_cast<std::size_t>(i)].blocks[0].spacing(),
                            inputs[static_cast<std::size_t>(i)].blocks[0].dim);
    }
    SampledField out({k.data.blocks[0]});
    const std::size_t xcount = out.size();
    for (std::size_t x = 0; x < xcount; ++x) {
        cplx acc{0, 0};
        for (std::size_t t = 0; t < tail; ++t) {
            cplx prod = k.data.data[x * tail + t];
            std::size_t rem = t;
            for (int i = r - 1; i >= 0; --i) {
                prod *= inputs[static_cast<std::size_t>(i)].data[rem % counts[static_cast<std::size_t>(i)]];
                rem /= counts[static_cast<std::size_t>(i)];
            }
            acc += prod;
        }
        out.data[x] = acc * measure;
    }
    return out;
}

namespace {

double reduce_vec(std::vector<double>& vals, double p) {
    if (std::isinf(p)) {
        double m = 0;
        for (double v : vals) m = std::max(m, v);
        return m;
    }
    double s = 0;
    for (double v : vals) s += std::pow(v, p);
    return std::pow(s, 1.0 / p);
}

double nested_recurse(const CoefficientTensor& t, const NestedNormSpec& spec,
                      std::vector<int>& fixed, std::size_t level,
                      const std::vector<int>& slot_of_level) {
    const std::size_t g = t.indices.size();
    if (level == g) {
        // fixed holds one signed index per group, in group order
        std::vector<int> flat;
        for (std::size_t j = 0; j < g; ++j)
            for (int a = 0; a < t.indices[j].dim; ++a)
                flat.push_back(fixed[j * 4 + static_cast<std::size_t>(a)]);
        double w = 1.0;
        if (!spec.weights.empty())
            for (std::size_t i = 0; i < g; ++i)
                if (spec.weights[i]) {
                    const auto& grp = t.indices[static_cast<std::size_t>(slot_of_level[i])];
                    std::size_t axis0 = 0;
                    for (int j = 0; j < slot_of_level[i]; ++j)
                        axis0 += static_cast<std::size_t>(t.indices[static_cast<std::size_t>(j)].dim);
                    std::vector<double> pt(static_cast<std::size_t>(grp.dim));
                    for (int a = 0; a < grp.dim; ++a)
                        pt[static_cast<std::size_t>(a)] =
                            t.coordinate(grp, flat[axis0 + static_cast<std::size_t>(a)]);
                    w *= spec.weights[i]->eval(pt);
                }
        return std::abs(t.data[t.offset(flat)]) * w;
    }
    const int slot = slot_of_level[level];
    const auto& grp = t.indices[static_cast<std::size_t>(slot)];
    std::vector<double> vals;
    std::vector<int> sub(static_cast<std::size_t>(grp.dim), -grp.radius);
    while (true) {
        for (int a = 0; a < grp.dim; ++a)
            fixed[static_cast<std::size_t>(slot) * 4 + static_cast<std::size_t>(a)] =
                sub[static_cast<std::size_t>(a)];
        vals.push_back(nested_recurse(t, spec, fixed, level + 1, slot_of_level));
        int a = grp.dim - 1;
        while (a >= 0) {
            if (++sub[static_cast<std::size_t>(a)] <= grp.radius) break;
            sub[static_cast<std::size_t>(a)] = -grp.radius;
            --a;
        }
        if (a < 0) break;
    }
    return reduce_vec(vals, spec.exponents[level]);
}

} // namespace

double nested_norm_recursive(const CoefficientTensor& t, const NestedNormSpec& spec) {
    const std::size_t g = t.indices.size();
    if (spec.index_order.size() != g || spec.exponents.size() != g)
        throw std::invalid_argument("nested_norm_recursive: spec does not cover the tensor");
    std::vector<int> slot_of_level(g, -1);
    for (std::size_t i = 0; i < g; ++i) {
        for (std::size_t j = 0; j < g; ++j)
            if (t.indices[j].name == spec.index_order[i]) slot_of_level[i] = static_cast<int>(j);
        if (slot_of_level[i] < 0)
            throw std::invalid_argument("nested_norm_recursive: unknown index name");
    }
    for (const auto& grp : t.indices)
        if (grp.dim > 4) throw std::invalid_argument("nested_norm_recursive: dim cap exceeded");
    std::vector<int> fixed(g * 4, 0);
    return nested_recurse(t, spec, fixed, 0, slot_of_level);
}

namespace {

// frame matrix assembled atom by atom: S = sum_k h^d vec(g_k) vec(g_k)^H
Eigen::MatrixXcd frame_matrix_atoms(const GaborSystem& sys) {
    const int d = sys.dim();
    const std::size_t n = sys.window.size();
    const double cell = cell_measure(sys.window.blocks);
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n),
                                                static_cast<Eigen::Index>(n));
    std::vector<int> m(static_cast<std::size_t>(d)), nn(static_cast<std::size_t>(d));
    std::function<void(int, std::vector<int>&, int, std::function<void()>)> loop =
        [&](int axis, std::vector<int>& idx, int radius, std::function<void()> body) {
            if (axis == d) { body(); return; }
            for (int v = -radius; v <= radius; ++v) {
                idx[static_cast<std::size_t>(axis)] = v;
                loop(axis + 1, idx, radius, body);
            }
        };
    loop(0, m, sys.m_range, [&] {
        loop(0, nn, sys.n_range, [&] {
            const SampledField atom = gabor_atom(sys, m, nn);
            Eigen::VectorXcd va(static_cast<Eigen::Index>(n));
            for (std::size_t j = 0; j < n; ++j) va(static_cast<Eigen::Index>(j)) = atom.data[j];
            M.noalias() += cell * va * va.adjoint();
        });
    });
    return M;
}

} // namespace

SampledField dual_window_dense(const GaborSystem& sys) {
    Eigen::MatrixXcd M = frame_matrix_atoms(sys);
    Eigen::VectorXcd g(static_cast<Eigen::Index>(sys.window.size()));
    for (std::size_t j = 0; j < sys.window.size(); ++j)
        g(static_cast<Eigen::Index>(j)) = sys.window.data[j];
    Eigen::VectorXcd x = M.ldlt().solve(g);
    SampledField out(sys.window.blocks);
    for (std::size_t j = 0; j < out.size(); ++j) out.data[j] = x(static_cast<Eigen::Index>(j));
    return out;
}

FrameBounds frame_bounds_eigen(const GaborSystem& sys) {
    Eigen::MatrixXcd M = frame_matrix_atoms(sys);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M, Eigen::EigenvaluesOnly);
    return FrameBounds{es.eigenvalues()(0), es.eigenvalues()(es.eigenvalues().size() - 1)};
}

SampledField fio_apply_serial(const FioProblem& p, std::span<const SampledField> inputs) {
    const int r = p.arity();
    if (static_cast<int>(inputs.size()) != r)
        throw std::invalid_argument("fio_apply_serial: arity mismatch");
    std::vector<SampledField> hats;
    double measure = 1.0;
    std::set<int> b0{0};
    for (int k = 0; k < r; ++k) {
        hats.push_back(dft_direct(inputs[static_cast<std::size_t>(k)], b0, -1));
        measure *= std::pow(hats.back().blocks[0].spacing(), hats.back().blocks[0].dim);
    }
    const int d = p.symbol.dim;
    SampledField out({p.x_grid});
    const auto xshape = out.shape();
    std::vector<std::size_t> counts(static_cast<std::size_t>(r));
    std::size_t tail = 1;
    for (int k = 0; k < r; ++k) {
        counts[static_cast<std::size_t>(k)] = hats[static_cast<std::size_t>(k)].size();
        tail *= counts[static_cast<std::size_t>(k)];
    }
    std::vector<double> z(static_cast<std::size_t>(d * (r + 1)));
    std::vector<int> xidx(static_cast<std::size_t>(d));
    for (std::size_t xj = 0; xj < out.size(); ++xj) {
        coords_of(out, xj, std::span<double>(z.data(), static_cast<std::size_t>(d)));
        cplx acc{0, 0};
        for (std::size_t t = 0; t < tail; ++t) {
            std::size_t rem = t;
            cplx prod{1, 0};
            for (int k = r - 1; k >= 0; --k) {
                const std::size_t ik = rem % counts[static_cast<std::size_t>(k)];
                rem /= counts[static_cast<std::size_t>(k)];
                prod *= hats[static_cast<std::size_t>(k)].data[ik];
                coords_of(hats[static_cast<std::size_t>(k)], ik,
                          std::span<double>(z.data() + (k + 1) * d, static_cast<std::size_t>(d)));
            }
            acc += p.symbol.eval(z) * std::polar(1.0, two_pi * p.joint_phase(z)) * prod;
        }
        out.data[xj] = acc * measure;
    }
    return out;
}

cplx gabor_matrix_entry(const KernelField& k, const GaborSystem& sys, std::span<const int> entry) {
    const int r = k.arity();
    const int d = sys.dim();
    if (static_cast<int>(entry.size()) != 2 * d * (r + 1))
        throw std::invalid_argument("gabor_matrix_entry: bad entry arity");
    std::vector<SampledField> atoms;
    for (int slot = 1; slot <= r; ++slot) {
        const std::span<const int> m(entry.data() + 2 * d * slot, static_cast<std::size_t>(d));
        const std::span<const int> n(entry.data() + 2 * d * slot + d, static_cast<std::size_t>(d));
        atoms.push_back(gabor_atom(sys, m, n));
    }
    const SampledField applied = bk_apply_loops(k, atoms);
    const std::span<const int> mp(entry.data(), static_cast<std::size_t>(d));
    const std::span<const int> np(entry.data() + d, static_cast<std::size_t>(d));
    const SampledField test_atom = gabor_atom(sys, mp, np);
    return inner(applied, test_atom);
}

} // namespace tfio::ref
