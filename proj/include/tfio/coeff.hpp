#pragma once

#include "tfio/grid.hpp"
#include "tfio/weights.hpp"

#include <optional>
#include <string>

namespace tfio {

// One named lattice index group: values range over the box [-radius, radius]^dim.
struct CoeffIndex {
    std::string name;
    int radius = 0;
    int dim = 1;
    bool is_freq = false; // lattice coordinate is beta*k (else alpha*k)

    int side() const { return 2 * radius + 1; }
    std::size_t count() const {
        std::size_t c = 1;
        for (int a = 0; a < dim; ++a) c *= static_cast<std::size_t>(side());
        return c;
    }
};

// Complex tensor over tuples of lattice index groups (Gabor coefficients use
// the pair (m,n); Gabor matrices use r+1 pairs). Row-major over the groups in
// declared order, each group contributing dim axes.
struct CoefficientTensor {
    double alpha = 1.0;
    double beta = 1.0;
    std::vector<CoeffIndex> indices;
    std::vector<cplx> data;

    CoefficientTensor() = default;
    CoefficientTensor(double a, double b, std::vector<CoeffIndex> idx)
        : alpha(a), beta(b), indices(std::move(idx)) {
        data.assign(total_count(indices), cplx{0.0, 0.0});
    }

    static std::size_t total_count(const std::vector<CoeffIndex>& idx) {
        std::size_t c = 1;
        for (const auto& g : idx) c *= g.count();
        return c;
    }

    std::size_t size() const { return data.size(); }

    // per-axis shape (each group expands to `dim` axes of size `side`)
    std::vector<int> shape() const {
        std::vector<int> s;
        for (const auto& g : indices)
            for (int a = 0; a < g.dim; ++a) s.push_back(g.side());
        return s;
    }

    const CoeffIndex* find(const std::string& name) const {
        for (const auto& g : indices)
            if (g.name == name) return &g;
        return nullptr;
    }

    // flat offset from per-group integer indices in [-radius, radius]
    std::size_t offset(std::span<const int> idx) const;
    // decode flat -> per-axis signed indices, shape order
    void decode(std::size_t flat, std::span<int> out) const;
    // lattice coordinate of one signed index for a group
    double coordinate(const CoeffIndex& g, int k) const { return (g.is_freq ? beta : alpha) * k; }

    double l1_norm() const {
        double s = 0;
        for (const cplx& z : data) s += std::abs(z);
        return s;
    }
};

// Weighted mixed sequence norm over a single (m,n) pair: inner p over m with
// weight v(alpha m, beta n), outer q over n; counting measure, sup for
// infinite exponents.
double mixed_norm(const CoefficientTensor& c, double p, double q,
                  const WeightSpec* v = nullptr);

// Iterated norm specification: index_order lists group names outermost first;
// exponents in [1, inf] (use INFINITY); optional per-index weight evaluated at
// the group's lattice coordinates.
struct NestedNormSpec {
    std::vector<std::string> index_order;
    std::vector<double> exponents;
    std::vector<std::optional<WeightSpec>> weights; // may be empty (= none)
};

double nested_mixed_norm(const CoefficientTensor& t, const NestedNormSpec& spec);

} // namespace tfio
