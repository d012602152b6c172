#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace tfio {

using cplx = std::complex<double>;

// Uniform grid covering [-R, R)^dim with N points per axis, x_j = -R + j*h.
// Spacing is always derived from (N, R); it is never stored.
struct UniformGrid {
    int dim = 1;
    int points = 2;       // N, per axis
    double half_width = 1; // R

    UniformGrid() = default;
    UniformGrid(int d, int n, double r) : dim(d), points(n), half_width(r) {
        if (d < 1) throw std::invalid_argument("UniformGrid: dim must be positive");
        if (n < 2) throw std::invalid_argument("UniformGrid: need at least 2 points per axis");
        if (!(r > 0)) throw std::invalid_argument("UniformGrid: half_width must be positive");
    }

    double spacing() const { return 2.0 * half_width / points; }
    double coord(int j) const { return -half_width + j * spacing(); }

    // Frequency grid of the Riemann-sum Fourier transform: spacing 1/(2R),
    // half-width N/(4R). Dual of the dual is the original grid.
    UniformGrid dual() const { return UniformGrid(dim, points, points / (4.0 * half_width)); }

    // Nearest grid index for a coordinate; distance to that node reported.
    int nearest_index(double x, double* snap_distance = nullptr) const {
        const double h = spacing();
        long j = std::lround((x + half_width) / h);
        if (j < 0) j = 0;
        if (j >= points) j = points - 1;
        if (snap_distance) *snap_distance = std::abs(coord(static_cast<int>(j)) - x);
        return static_cast<int>(j);
    }

    // Exact index of an on-grid coordinate, or nullopt.
    std::optional<int> index_of(double x, double tol = 1e-9) const {
        double dist = 0;
        const int j = nearest_index(x, &dist);
        if (dist > tol * std::max(1.0, half_width)) return std::nullopt;
        return j;
    }

    bool operator==(const UniformGrid& o) const {
        return dim == o.dim && points == o.points &&
               std::abs(half_width - o.half_width) <= 1e-12 * std::max(1.0, half_width);
    }
};

// Complex samples on a product of uniform grid blocks. Block b of dimension
// d_b contributes d_b tensor axes of size blocks[b].points each; data is
// row-major over the axes in declared order. Values are immutable by
// convention once an operation returns a field.
struct SampledField {
    std::vector<UniformGrid> blocks;
    std::vector<cplx> data;

    SampledField() = default;
    explicit SampledField(std::vector<UniformGrid> b) : blocks(std::move(b)) {
        data.assign(element_count(blocks), cplx{0.0, 0.0});
    }
    SampledField(std::vector<UniformGrid> b, std::vector<cplx> d)
        : blocks(std::move(b)), data(std::move(d)) {
        if (data.size() != element_count(blocks))
            throw std::invalid_argument("SampledField: data size does not match grid shape");
    }

    static std::size_t element_count(const std::vector<UniformGrid>& blocks) {
        std::size_t n = 1;
        for (const auto& g : blocks)
            for (int a = 0; a < g.dim; ++a) n *= static_cast<std::size_t>(g.points);
        return n;
    }

    int axis_count() const {
        int n = 0;
        for (const auto& g : blocks) n += g.dim;
        return n;
    }

    std::vector<int> shape() const {
        std::vector<int> s;
        for (const auto& g : blocks)
            for (int a = 0; a < g.dim; ++a) s.push_back(g.points);
        return s;
    }

    const UniformGrid& block_of_axis(int axis) const {
        for (const auto& g : blocks) {
            if (axis < g.dim) return g;
            axis -= g.dim;
        }
        throw std::out_of_range("SampledField: axis out of range");
    }

    std::size_t size() const { return data.size(); }
    cplx& operator[](std::size_t i) { return data[i]; }
    const cplx& operator[](std::size_t i) const { return data[i]; }

    bool finite() const;
};

// Row-major strides for a shape.
std::vector<std::size_t> strides_of(const std::vector<int>& shape);

// Decode flat index -> per-axis indices.
void unflatten(std::size_t flat, const std::vector<int>& shape, std::span<int> out);

// Cell measure of the product grid: prod over blocks of h^dim.
double cell_measure(const std::vector<UniformGrid>& blocks);

// Quadrature-weighted L2 norm and inner product, <f,g> = sum f conj(g) * cell.
double l2_norm(const SampledField& f);
cplx inner(const SampledField& f, const SampledField& g);

// Time-frequency shift parameters (M_xi T_x): translate by x, modulate by xi.
struct TimeFrequencyShift {
    std::vector<double> translation;
    std::vector<double> modulation;
};

// M_xi T_x f on the same grid. Translation must be an integer multiple of the
// grid spacing per axis (off-grid translations are rejected, not
// interpolated); translates are zero-filled outside the window.
SampledField apply_shift(const SampledField& f, const TimeFrequencyShift& shift);

// Coordinates of a flat index (concatenated over blocks/axes).
void coords_of(const SampledField& f, std::size_t flat, std::span<double> out);

} // namespace tfio
