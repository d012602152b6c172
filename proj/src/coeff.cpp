#include "tfio/coeff.hpp"

#include <cmath>
#include <stdexcept>

namespace tfio {

std::size_t CoefficientTensor::offset(std::span<const int> idx) const {
    std::size_t expected = 0;
    for (const auto& g : indices) expected += static_cast<std::size_t>(g.dim);
    if (idx.size() != expected)
        throw std::invalid_argument("CoefficientTensor::offset: index arity mismatch");
    std::size_t off = 0;
    std::size_t a = 0;
    for (const auto& g : indices)
        for (int k = 0; k < g.dim; ++k, ++a) {
            const int j = idx[a];
            if (j < -g.radius || j > g.radius)
                throw std::out_of_range("CoefficientTensor::offset: index outside truncation");
            off = off * static_cast<std::size_t>(g.side()) +
                  static_cast<std::size_t>(j + g.radius);
        }
    return off;
}

void CoefficientTensor::decode(std::size_t flat, std::span<int> out) const {
    const auto sh = shape();
    std::vector<int> raw(sh.size());
    unflatten(flat, sh, raw);
    std::size_t a = 0;
    for (const auto& g : indices)
        for (int k = 0; k < g.dim; ++k, ++a) out[a] = raw[a] - g.radius;
}

namespace {

double reduce_p(std::span<const double> vals, double p) {
    if (std::isinf(p)) {
        double m = 0;
        for (double v : vals) m = std::max(m, v);
        return m;
    }
    double s = 0;
    for (double v : vals) s += std::pow(v, p);
    return std::pow(s, 1.0 / p);
}

} // namespace

double mixed_norm(const CoefficientTensor& c, double p, double q, const WeightSpec* v) {
    if (c.indices.size() != 2)
        throw std::invalid_argument("mixed_norm: tensor must have exactly one (m,n) pair");
    if (p < 1 || q < 1) throw std::invalid_argument("mixed_norm: exponents must be >= 1");
    const CoeffIndex& m = c.indices[0];
    const CoeffIndex& n = c.indices[1];
    if (v && v->dim() != m.dim + n.dim)
        throw std::invalid_argument("mixed_norm: weight dimension mismatch");

    const std::size_t mcount = m.count(), ncount = n.count();
    std::vector<int> mi(static_cast<std::size_t>(m.dim)), ni(static_cast<std::size_t>(n.dim));
    std::vector<double> point(static_cast<std::size_t>(m.dim + n.dim));
    std::vector<double> inner_vals(mcount), outer_vals(ncount);

    std::vector<int> mshape(static_cast<std::size_t>(m.dim), m.side());
    std::vector<int> nshape(static_cast<std::size_t>(n.dim), n.side());

    for (std::size_t jn = 0; jn < ncount; ++jn) {
        unflatten(jn, nshape, ni);
        for (int a = 0; a < n.dim; ++a)
            point[static_cast<std::size_t>(m.dim + a)] = c.beta * (ni[static_cast<std::size_t>(a)] - n.radius);
        for (std::size_t jm = 0; jm < mcount; ++jm) {
            unflatten(jm, mshape, mi);
            for (int a = 0; a < m.dim; ++a)
                point[static_cast<std::size_t>(a)] = c.alpha * (mi[static_cast<std::size_t>(a)] - m.radius);
            const double wv = v ? v->eval(point) : 1.0;
            inner_vals[jm] = std::abs(c.data[jm * ncount + jn]) * wv;
        }
        outer_vals[jn] = reduce_p(inner_vals, p);
    }
    return reduce_p(outer_vals, q);
}

double nested_mixed_norm(const CoefficientTensor& t, const NestedNormSpec& spec) {
    const std::size_t g = t.indices.size();
    if (spec.index_order.size() != g || spec.exponents.size() != g)
        throw std::invalid_argument("nested_mixed_norm: spec must cover every index exactly once");
    if (!spec.weights.empty() && spec.weights.size() != g)
        throw std::invalid_argument("nested_mixed_norm: weights must match index count");

    // map order position -> group slot
    std::vector<int> slot(g, -1);
    for (std::size_t i = 0; i < g; ++i) {
        for (std::size_t j = 0; j < g; ++j)
            if (t.indices[j].name == spec.index_order[i]) {
                if (slot[i] != -1) throw std::invalid_argument("nested_mixed_norm: duplicate index name");
                slot[i] = static_cast<int>(j);
            }
        if (slot[i] == -1)
            throw std::invalid_argument("nested_mixed_norm: unknown index '" + spec.index_order[i] + "'");
        for (std::size_t j = 0; j < i; ++j)
            if (slot[j] == slot[i]) throw std::invalid_argument("nested_mixed_norm: repeated index");
        if (spec.exponents[i] < 1)
            throw std::invalid_argument("nested_mixed_norm: exponents must be >= 1");
    }

    // start from |t| with per-group weights applied pointwise
    std::vector<std::size_t> counts(g);
    for (std::size_t j = 0; j < g; ++j) counts[j] = t.indices[j].count();

    std::vector<double> cur(t.size());
    {
        std::vector<int> idx(t.shape().size());
        for (std::size_t f = 0; f < t.size(); ++f) {
            t.decode(f, idx);
            double w = 1.0;
            if (!spec.weights.empty()) {
                std::size_t axis = 0;
                for (std::size_t j = 0; j < g; ++j) {
                    const auto& grp = t.indices[j];
                    // find the weight attached to this group (by order position)
                    const WeightSpec* wj = nullptr;
                    for (std::size_t i = 0; i < g; ++i)
                        if (slot[i] == static_cast<int>(j) && spec.weights[i]) wj = &*spec.weights[i];
                    if (wj) {
                        std::vector<double> pt(static_cast<std::size_t>(grp.dim));
                        for (int a = 0; a < grp.dim; ++a)
                            pt[static_cast<std::size_t>(a)] = t.coordinate(grp, idx[axis + a]);
                        w *= wj->eval(pt);
                    }
                    axis += static_cast<std::size_t>(grp.dim);
                }
            }
            cur[f] = std::abs(t.data[f]) * w;
        }
    }

    // reduce innermost-last: walk index_order from the back; the surviving
    // groups keep their relative order, so reduce by permuted gather.
    std::vector<int> live;
    for (std::size_t j = 0; j < g; ++j) live.push_back(static_cast<int>(j));

    for (std::size_t step = g; step-- > 0;) {
        const int target = slot[step];
        const double p = spec.exponents[step];
        // position of target among live groups
        std::size_t pos = 0;
        while (live[pos] != target) ++pos;

        std::vector<std::size_t> live_counts(live.size());
        for (std::size_t j = 0; j < live.size(); ++j)
            live_counts[j] = counts[static_cast<std::size_t>(live[j])];

        std::size_t outer = 1, mid = live_counts[pos], inner = 1;
        for (std::size_t j = 0; j < pos; ++j) outer *= live_counts[j];
        for (std::size_t j = pos + 1; j < live.size(); ++j) inner *= live_counts[j];

        std::vector<double> next(outer * inner);
        for (std::size_t o = 0; o < outer; ++o)
            for (std::size_t i = 0; i < inner; ++i) {
                if (std::isinf(p)) {
                    double m = 0;
                    for (std::size_t k = 0; k < mid; ++k)
                        m = std::max(m, cur[(o * mid + k) * inner + i]);
                    next[o * inner + i] = m;
                } else {
                    double s = 0;
                    for (std::size_t k = 0; k < mid; ++k)
                        s += std::pow(cur[(o * mid + k) * inner + i], p);
                    next[o * inner + i] = std::pow(s, 1.0 / p);
                }
            }
        cur = std::move(next);
        live.erase(live.begin() + static_cast<std::ptrdiff_t>(pos));
    }
    return cur[0];
}

} // namespace tfio
