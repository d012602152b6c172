#include "tfio/verify.hpp"

#include "tfio/fft.hpp"
#include "tfio/rng.hpp"

#include <cmath>
#include <map>
#include <numbers>

namespace tfio {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

FitResult fit_decay_exponent(std::span<const std::pair<double, double>> samples) {
    std::vector<std::pair<double, double>> usable;
    for (const auto& [dist, mag] : samples)
        if (dist > 0 && mag > 1e-14) usable.emplace_back(std::log(dist), std::log(mag));
    if (usable.size() < 3)
        throw std::invalid_argument("fit_decay_exponent: need at least 3 usable samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : usable) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(usable.size());
    const double denom = n * sxx - sx * sx;
    FitResult fit;
    if (std::abs(denom) < 1e-30) {
        fit.slope = 0;
        fit.intercept = sy / n;
    } else {
        fit.slope = (n * sxy - sx * sy) / denom;
        fit.intercept = (sy - fit.slope * sx) / n;
    }
    double res = 0;
    for (const auto& [x, y] : usable) {
        const double e = y - (fit.intercept + fit.slope * x);
        res += e * e;
    }
    fit.residual = std::sqrt(res / n);
    return fit;
}

namespace {

// field value at a point that should sit on the grid; accumulates the worst
// snap distance, returns 0 outside the truncation window
cplx field_value_at(const SampledField& f, std::span<const double> coords, double* max_snap) {
    std::size_t off = 0;
    int axis = 0;
    for (const auto& b : f.blocks)
        for (int a = 0; a < b.dim; ++a, ++axis) {
            double snap = 0;
            const int j = b.nearest_index(coords[static_cast<std::size_t>(axis)], &snap);
            const double x = coords[static_cast<std::size_t>(axis)];
            if (x < b.coord(0) - 0.5 * b.spacing() || x > b.coord(b.points - 1) + 0.5 * b.spacing())
                return cplx{0, 0}; // outside the truncation window
            if (max_snap) *max_snap = std::max(*max_snap, snap);
            off = off * static_cast<std::size_t>(b.points) + static_cast<std::size_t>(j);
        }
    return f.data[off];
}

// STFT of a sampled field at one (time, freq) point by direct summation
cplx stft_at(const SampledField& f, const SampledField& window, std::span<const double> u,
             std::span<const double> v, double* max_snap) {
    const auto shape = f.shape();
    const int axes = f.axis_count();
    const double cell = cell_measure(f.blocks);
    std::vector<double> t(static_cast<std::size_t>(axes)), tu(static_cast<std::size_t>(axes));
    cplx acc{0, 0};
    for (std::size_t j = 0; j < f.size(); ++j) {
        coords_of(f, j, t);
        double phase = 0;
        for (int a = 0; a < axes; ++a) {
            tu[static_cast<std::size_t>(a)] =
                t[static_cast<std::size_t>(a)] - u[static_cast<std::size_t>(a)];
            phase += v[static_cast<std::size_t>(a)] * t[static_cast<std::size_t>(a)];
        }
        const cplx w = field_value_at(window, tu, max_snap);
        if (w == cplx{0, 0}) continue;
        acc += f.data[j] * std::conj(w) * std::polar(1.0, -two_pi * phase);
    }
    return acc * cell;
}

// reverse every block of a sampled field, t -> -t with the half-open edge
// wrapped (exact on the grid for even point counts)
SampledField reverse_field(const SampledField& f) {
    SampledField out(f.blocks);
    const auto shape = f.shape();
    std::vector<int> idx(shape.size());
    for (std::size_t j = 0; j < f.size(); ++j) {
        unflatten(j, shape, idx);
        std::size_t src = 0;
        for (std::size_t a = 0; a < shape.size(); ++a) {
            const int n = shape[a];
            const int neg = (n - idx[a]) % n;
            src = src * static_cast<std::size_t>(n) + static_cast<std::size_t>(neg);
        }
        out.data[j] = f.data[src];
    }
    return out;
}

} // namespace

StftRelationReport verify_kernel_symbol_stft(const FioProblem& p, const SampledField& window,
                                             int sample_count, std::uint64_t seed) {
    const int r = p.arity();
    const int d = p.symbol.dim;
    const int slots = r + 1;
    if (static_cast<int>(window.blocks.size()) != slots)
        throw std::invalid_argument("verify_kernel_symbol_stft: window must live on the product domain");
    for (const auto& b : window.blocks)
        if (!(b == p.x_grid))
            throw std::invalid_argument("verify_kernel_symbol_stft: window blocks must match the x grid");

    // kernel side
    const KernelField K = kernel_from_symbol(p);

    // symbol side: sigma0 sampled on the x-grid in every slot
    std::vector<UniformGrid> sblocks(static_cast<std::size_t>(slots), p.x_grid);
    SampledField sigma0(sblocks);
    {
        const int nc = p.symbol.coord_count();
        #pragma omp parallel for schedule(static)
        for (long long jj = 0; jj < static_cast<long long>(sigma0.size()); ++jj) {
            const std::size_t j = static_cast<std::size_t>(jj);
            std::vector<double> z(static_cast<std::size_t>(nc));
            coords_of(sigma0, j, z);
            sigma0.data[j] = p.symbol.eval(z) * std::polar(1.0, two_pi * p.joint_phase(z));
        }
    }

    // H = F_1 G, reflected
    const SampledField H = dft(window, std::set<int>{0}, -1);
    const SampledField Hcheck = reverse_field(H);

    const PhaseSpaceTransform A{r, d};
    Rng rng(seed);
    const UniformGrid& xg = p.x_grid;

    StftRelationReport rep;
    rep.sample_count = sample_count;
    rep.seed = seed;

    const int total = slots * d;
    std::vector<double> u(static_cast<std::size_t>(total)), v(static_cast<std::size_t>(total));
    std::vector<double> uv(static_cast<std::size_t>(2 * total));
    for (int s = 0; s < sample_count; ++s) {
        // central on-grid nodes
        for (int a = 0; a < total; ++a) {
            const int lo = xg.points / 4, hi = 3 * xg.points / 4;
            u[static_cast<std::size_t>(a)] =
                xg.coord(lo + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(hi - lo)));
            v[static_cast<std::size_t>(a)] =
                xg.coord(lo + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(hi - lo)));
        }
        const cplx lhs = stft_at(K.data, window, u, v, &rep.max_snap);

        std::copy(u.begin(), u.end(), uv.begin());
        std::copy(v.begin(), v.end(), uv.begin() + total);
        const auto ab = A.forward(uv);
        const std::span<const double> aa(ab.data(), static_cast<std::size_t>(total));
        const std::span<const double> bb(ab.data() + total, static_cast<std::size_t>(total));
        const cplx rhs = stft_at(sigma0, Hcheck, aa, bb, &rep.max_snap);

        rep.max_deviation = std::max(rep.max_deviation, std::abs(std::abs(lhs) - std::abs(rhs)));
    }
    return rep;
}

bool BoundednessRow::holder_consistent(double tol) const {
    double ip = 0, iq = 0;
    for (double e : p) ip += std::isinf(e) ? 0.0 : 1.0 / e;
    for (double e : q) iq += std::isinf(e) ? 0.0 : 1.0 / e;
    const double t1 = std::isinf(s1) ? 0.0 : 1.0 / s1;
    const double t2 = std::isinf(s2) ? 0.0 : 1.0 / s2;
    return std::abs(ip - t1) <= tol && std::abs(iq - t2) <= tol;
}

BoundednessRow verify_boundedness(
    const std::function<SampledField(std::span<const SampledField>)>& op, int arity,
    const GaborSystem& draw_small, const GaborSystem& draw_large, const SampledField& norm_window,
    std::span<const double> p, std::span<const double> q, double s1, double s2,
    const WeightSpec* input_weight, const WeightSpec* target_weight, int trials,
    double coeff_decay, std::uint64_t seed, std::string family, bool target_plain_l1) {
    if (static_cast<int>(p.size()) != arity || static_cast<int>(q.size()) != arity)
        throw std::invalid_argument("verify_boundedness: exponent tuple arity mismatch");
    if (draw_small.m_range > draw_large.m_range || draw_small.n_range > draw_large.n_range)
        throw std::invalid_argument("verify_boundedness: small radius must not exceed the large one");

    BoundednessRow row;
    row.p.assign(p.begin(), p.end());
    row.q.assign(q.begin(), q.end());
    row.s1 = s1;
    row.s2 = s2;
    row.trials = trials;
    row.seed = seed;
    row.family = std::move(family);
    row.weight_id = input_weight ? input_weight->describe() : "one";

    const int d = draw_large.dim();

    for (int pass = 0; pass < 2; ++pass) {
        const GaborSystem& sys = pass == 0 ? draw_small : draw_large;
        double worst = 0;
        for (int t = 0; t < trials; ++t) {
            Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(t));
            std::vector<SampledField> inputs;
            double denom = 1.0;
            bool degenerate = false;
            for (int k = 0; k < arity; ++k) {
                // draw on the large lattice, truncate for the small pass; the
                // stream is consumed identically either way
                CoefficientTensor big(draw_large.alpha, draw_large.beta,
                                      {CoeffIndex{"m", draw_large.m_range, d, false},
                                       CoeffIndex{"n", draw_large.n_range, d, true}});
                std::vector<int> idx(static_cast<std::size_t>(2 * d));
                std::vector<double> pt(static_cast<std::size_t>(2 * d));
                for (std::size_t f = 0; f < big.size(); ++f) {
                    big.decode(f, idx);
                    std::size_t axis = 0;
                    for (const auto& g : big.indices)
                        for (int a = 0; a < g.dim; ++a, ++axis)
                            pt[axis] = big.coordinate(g, idx[axis]);
                    big.data[f] = rng.complex_gaussian() * bracket_pow(pt, -coeff_decay);
                }
                CoefficientTensor c(sys.alpha, sys.beta,
                                    {CoeffIndex{"m", sys.m_range, d, false},
                                     CoeffIndex{"n", sys.n_range, d, true}});
                for (std::size_t f = 0; f < c.size(); ++f) {
                    c.decode(f, idx);
                    c.data[f] = big.data[big.offset(idx)];
                }
                SampledField fk = synthesize(sys, c);
                const double nk = modulation_norm(fk, norm_window, row.p[static_cast<std::size_t>(k)],
                                                  row.q[static_cast<std::size_t>(k)], input_weight);
                if (!(nk > 1e-13)) { degenerate = true; break; }
                denom *= nk;
                inputs.push_back(std::move(fk));
            }
            if (degenerate) continue; // redraw: the next trial has a fresh stream
            const SampledField out = op(inputs);
            double num;
            if (target_plain_l1) {
                num = 0;
                for (const cplx& z : out.data) num += std::abs(z);
                num *= cell_measure(out.blocks);
            } else {
                num = modulation_norm(out, norm_window, s1, s2, target_weight);
            }
            worst = std::max(worst, num / denom);
        }
        (pass == 0 ? row.max_ratio_small : row.max_ratio_large) = worst;
    }
    return row;
}

namespace {

// Fit the asymptotic tail: the decay exponent lives at distances past the
// polynomial-to-decay transition, so buckets below distance 2 are dropped
// whenever enough tail samples remain. Slope 0 when nothing usable survives
// (zero operators).
double fit_slope_or_zero(std::span<const std::pair<double, double>> samples) {
    std::vector<std::pair<double, double>> tail;
    for (const auto& [d, m] : samples)
        if (d >= 2.0 && m > 1e-14) tail.push_back({d, m});
    if (tail.size() >= 3) return fit_decay_exponent(tail).slope;
    int usable = 0;
    for (const auto& [d, m] : samples)
        if (d > 0 && m > 1e-14) ++usable;
    if (usable < 3) return 0.0;
    return fit_decay_exponent(samples).slope;
}

struct Profile {
    std::map<long, double> buckets; // integer offset -> max magnitude
    void add(long key, double mag) {
        auto& v = buckets[key];
        v = std::max(v, mag);
    }
    std::vector<std::pair<double, double>> samples(double scale) const {
        std::vector<std::pair<double, double>> out;
        for (const auto& [k, m] : buckets)
            out.emplace_back(bracket_pow(scale * static_cast<double>(k), 1.0), m);
        return out;
    }
};

} // namespace

DecayReport verify_decay_fio(const FioProblem& p, const GaborSystem& sys, int radius_small,
                             std::span<const int> n_list) {
    if (p.arity() != 2)
        throw std::invalid_argument("verify_decay_fio: bilinear problems only");
    if (sys.dim() != 1 || p.symbol.dim != 1)
        throw std::invalid_argument("verify_decay_fio: d = 1 at desk scale");
    const KernelField K = kernel_from_symbol(p);

    DecayReport rep;
    rep.radius_small = radius_small;
    rep.radius_large = sys.m_range;
    for (int n : n_list) rep.orders.push_back({n, n, n});
    rep.c_small.assign(n_list.size(), 0.0);
    rep.c_large.assign(n_list.size(), 0.0);
    rep.c_joint_small.assign(n_list.size(), 0.0);
    rep.c_joint_large.assign(n_list.size(), 0.0);

    std::array<Profile, 3> dirs;

    const int nr = sys.n_range;
    std::vector<double> grad(static_cast<std::size_t>(3));
    std::vector<double> z(static_cast<std::size_t>(3));

    gabor_matrix_scan(K, sys, [&](std::span<const int> trans, std::span<const cplx> fiber) {
        const int mp = trans[0], m = trans[1], m0 = trans[2];
        const bool small_t = std::abs(mp) <= radius_small && std::abs(m) <= radius_small &&
                             std::abs(m0) <= radius_small;
        std::size_t f = 0;
        for (int np = -nr; np <= nr; ++np)
            for (int n1 = -nr; n1 <= nr; ++n1)
                for (int n0 = -nr; n0 <= nr; ++n0, ++f) {
                    const double mag = std::abs(fiber[f]);
                    if (mag == 0.0) continue;
                    const bool small_e = small_t && std::abs(np) <= radius_small &&
                                         std::abs(n1) <= radius_small && std::abs(n0) <= radius_small;
                    // grad Phi at (alpha m', beta n, beta n0) minus (beta n', alpha m, alpha m0)
                    z[0] = sys.alpha * mp;
                    z[1] = sys.beta * n1;
                    z[2] = sys.beta * n0;
                    p.joint_phase_gradient(z, grad);
                    const double D0 = grad[0] - sys.beta * np;
                    const double D1 = grad[1] - sys.alpha * m;
                    const double D2 = grad[2] - sys.alpha * m0;
                    const double dsq = D0 * D0 + D1 * D1 + D2 * D2;
                    for (std::size_t i = 0; i < n_list.size(); ++i) {
                        const double w = std::pow(1.0 + dsq, n_list[i]); // <D>^{2N}
                        const double c = mag * w;
                        rep.c_large[i] = std::max(rep.c_large[i], c);
                        rep.c_joint_large[i] = std::max(rep.c_joint_large[i], c);
                        if (small_e) {
                            rep.c_small[i] = std::max(rep.c_small[i], c);
                            rep.c_joint_small[i] = std::max(rep.c_joint_small[i], c);
                        }
                    }
                    // profiles measure the decay law away from the grid
                    // boundary, where clipped translates would floor them
                    if (small_t) {
                        dirs[0].add(n1 + n0 - np, mag);
                        dirs[1].add(m - mp, mag);
                        dirs[2].add(m0 - mp, mag);
                    }
                }
    });

    for (int i = 0; i < 3; ++i) {
        const double scale = i == 0 ? sys.beta : sys.alpha;
        const auto samples = dirs[static_cast<std::size_t>(i)].samples(scale);
        rep.decay_slopes[static_cast<std::size_t>(i)] = fit_slope_or_zero(samples);
    }
    return rep;
}

DecayReport verify_decay_pdo(const SymbolSpec& sigma, const GaborSystem& sys, int radius_small,
                             std::span<const std::array<int, 3>> triples) {
    if (sigma.arity != 2) throw std::invalid_argument("verify_decay_pdo: bilinear symbols only");
    if (sys.dim() != 1 || sigma.dim != 1)
        throw std::invalid_argument("verify_decay_pdo: d = 1 at desk scale");

    double m1 = 0, m2 = 0, m3 = 0;
    const auto& cls = sigma.symbol_class;
    if (cls.kind == SymbolClass::Kind::SG || cls.kind == SymbolClass::Kind::Rough) {
        m1 = cls.orders[0];
        m2 = cls.orders[1];
        m3 = cls.orders[2];
    }

    FioProblem prob(sigma, {phase_linear(1), phase_linear(1)}, sys.grid());
    const KernelField K = kernel_from_symbol(prob);

    DecayReport rep;
    rep.radius_small = radius_small;
    rep.radius_large = sys.m_range;
    rep.orders.assign(triples.begin(), triples.end());
    rep.c_small.assign(triples.size(), 0.0);
    rep.c_large.assign(triples.size(), 0.0);
    rep.c_joint_small.assign(triples.size(), 0.0);
    rep.c_joint_large.assign(triples.size(), 0.0);

    std::array<Profile, 3> dirs;      // raw decay in each difference direction
    std::array<Profile, 3> growth;    // corrected growth against n, n0, m'
    const auto& lead = triples.empty() ? std::array<int, 3>{1, 1, 1} : triples[0];

    const int nr = sys.n_range;
    gabor_matrix_scan(K, sys, [&](std::span<const int> trans, std::span<const cplx> fiber) {
        const int mp = trans[0], m = trans[1], m0 = trans[2];
        const bool small_t = std::abs(mp) <= radius_small && std::abs(m) <= radius_small &&
                             std::abs(m0) <= radius_small;
        std::size_t f = 0;
        for (int np = -nr; np <= nr; ++np)
            for (int n1 = -nr; n1 <= nr; ++n1)
                for (int n0 = -nr; n0 <= nr; ++n0, ++f) {
                    const double mag = std::abs(fiber[f]);
                    if (mag == 0.0) continue;
                    const bool small_e = small_t && std::abs(np) <= radius_small &&
                                         std::abs(n1) <= radius_small && std::abs(n0) <= radius_small;
                    const double t1 = sys.beta * (n1 + n0 - np);
                    const double t2 = sys.alpha * (m - mp);
                    const double t3 = sys.alpha * (m0 - mp);
                    const double gn = bracket_pow(sys.beta * n1, 1.0);
                    const double gn0 = bracket_pow(sys.beta * n0, 1.0);
                    const double gmp = bracket_pow(sys.alpha * mp, 1.0);
                    for (std::size_t i = 0; i < triples.size(); ++i) {
                        const auto& [N1, N2, N3] = triples[i];
                        const double bound = std::pow(gn, m1) * std::pow(gn0, m2) * std::pow(gmp, m3) /
                                             (bracket_pow(t1, 2.0 * N3) * bracket_pow(t2, 2.0 * N1) *
                                              bracket_pow(t3, 2.0 * N2));
                        const double c = mag / bound;
                        rep.c_large[i] = std::max(rep.c_large[i], c);
                        if (small_e) rep.c_small[i] = std::max(rep.c_small[i], c);
                        if (N1 == N2 && N2 == N3) {
                            // joint <D>^{2N} form for the linear phase
                            const double dsq = t1 * t1 + t2 * t2 + t3 * t3;
                            const double cj = mag * std::pow(1.0 + dsq, N1) /
                                              (std::pow(gn, m1) * std::pow(gn0, m2) * std::pow(gmp, m3));
                            rep.c_joint_large[i] = std::max(rep.c_joint_large[i], cj);
                            if (small_e) rep.c_joint_small[i] = std::max(rep.c_joint_small[i], cj);
                        }
                    }
                    if (small_t) {
                        dirs[0].add(n1 + n0 - np, mag);
                        dirs[1].add(m - mp, mag);
                        dirs[2].add(m0 - mp, mag);
                    }
                    const double corrected = mag * bracket_pow(t1, 2.0 * lead[2]) *
                                             bracket_pow(t2, 2.0 * lead[0]) *
                                             bracket_pow(t3, 2.0 * lead[1]);
                    growth[0].add(n1, corrected / (std::pow(gn0, m2) * std::pow(gmp, m3)));
                    growth[1].add(n0, corrected / (std::pow(gn, m1) * std::pow(gmp, m3)));
                    growth[2].add(mp, corrected / (std::pow(gn, m1) * std::pow(gn0, m2)));
                }
    });

    for (int i = 0; i < 3; ++i) {
        const double dscale = i == 0 ? sys.beta : sys.alpha;
        rep.decay_slopes[static_cast<std::size_t>(i)] =
            fit_slope_or_zero(dirs[static_cast<std::size_t>(i)].samples(dscale));
        const double gscale = i == 2 ? sys.alpha : sys.beta;
        rep.growth_slopes[static_cast<std::size_t>(i)] =
            fit_slope_or_zero(growth[static_cast<std::size_t>(i)].samples(gscale));
    }
    return rep;
}

} // namespace tfio
