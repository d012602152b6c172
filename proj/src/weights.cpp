#include "tfio/weights.hpp"

#include "tfio/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace tfio {

double bracket_pow(std::span<const double> z, double s) {
    double q = 1.0;
    for (double zi : z) q += zi * zi;
    return std::pow(q, 0.5 * s);
}

double bracket_pow(double z, double s) { return std::pow(1.0 + z * z, 0.5 * s); }

std::vector<double> PhaseSpaceTransform::forward(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != vec_len())
        throw std::invalid_argument("PhaseSpaceTransform: bad vector length");
    const int slots = r + 1;
    std::vector<double> y(x.size());
    auto u = [&](int i, int a) { return x[static_cast<std::size_t>(i * d + a)]; };
    auto v = [&](int i, int a) { return x[static_cast<std::size_t>((slots + i) * d + a)]; };
    for (int a = 0; a < d; ++a) {
        y[static_cast<std::size_t>(a)] = u(0, a);                          // a_1 = u_1
        y[static_cast<std::size_t>(slots * d + a)] = v(0, a);              // b_1 = v_1
    }
    for (int i = 1; i < slots; ++i)
        for (int a = 0; a < d; ++a) {
            y[static_cast<std::size_t>(i * d + a)] = -v(i, a);             // a_i = -v_i
            y[static_cast<std::size_t>((slots + i) * d + a)] = u(i, a);    // b_i = u_i
        }
    return y;
}

std::vector<double> PhaseSpaceTransform::inverse(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != vec_len())
        throw std::invalid_argument("PhaseSpaceTransform: bad vector length");
    const int slots = r + 1;
    std::vector<double> y(x.size());
    auto a_ = [&](int i, int a) { return x[static_cast<std::size_t>(i * d + a)]; };
    auto b_ = [&](int i, int a) { return x[static_cast<std::size_t>((slots + i) * d + a)]; };
    for (int a = 0; a < d; ++a) {
        y[static_cast<std::size_t>(a)] = a_(0, a);                         // u_1 = a_1
        y[static_cast<std::size_t>(slots * d + a)] = b_(0, a);             // v_1 = b_1
    }
    for (int i = 1; i < slots; ++i)
        for (int a = 0; a < d; ++a) {
            y[static_cast<std::size_t>(i * d + a)] = b_(i, a);             // u_i = b_i
            y[static_cast<std::size_t>((slots + i) * d + a)] = -a_(i, a);  // v_i = -a_i
        }
    return y;
}

WeightSpec WeightSpec::one(int dim) {
    WeightSpec w;
    w.dim_ = dim;
    w.text_ = "one";
    w.fn_ = [](std::span<const double>) { return 1.0; };
    return w;
}

WeightSpec WeightSpec::omega(double s, int dim) {
    WeightSpec w;
    w.dim_ = dim;
    w.text_ = "omega(s=" + std::to_string(s) + ")";
    w.fn_ = [s](std::span<const double> x) { return bracket_pow(x, s); };
    return w;
}

WeightSpec WeightSpec::tensor(std::vector<WeightSpec> factors) {
    if (factors.empty()) throw std::invalid_argument("WeightSpec::tensor: no factors");
    WeightSpec w;
    w.dim_ = 0;
    w.text_ = "tensor(";
    for (std::size_t i = 0; i < factors.size(); ++i) {
        w.dim_ += factors[i].dim_;
        w.text_ += (i ? "," : "") + factors[i].text_;
    }
    w.text_ += ")";
    auto fs = std::make_shared<std::vector<WeightSpec>>(std::move(factors));
    w.fn_ = [fs](std::span<const double> x) {
        double p = 1.0;
        std::size_t off = 0;
        for (const auto& f : *fs) {
            p *= f.eval(x.subspan(off, static_cast<std::size_t>(f.dim())));
            off += static_cast<std::size_t>(f.dim());
        }
        return p;
    };
    return w;
}

WeightSpec WeightSpec::pullback(WeightSpec base,
                                std::function<std::vector<double>(std::span<const double>)> map,
                                std::string map_name) {
    WeightSpec w;
    w.dim_ = base.dim_;
    w.text_ = "pullback(" + map_name + "," + base.text_ + ")";
    auto b = std::make_shared<WeightSpec>(std::move(base));
    w.fn_ = [b, map = std::move(map)](std::span<const double> x) {
        const auto y = map(x);
        return b->eval(y);
    };
    return w;
}

WeightSpec WeightSpec::pullback_forward(WeightSpec base, const PhaseSpaceTransform& t) {
    if (base.dim() != t.vec_len())
        throw std::invalid_argument("pullback: weight dimension does not match transform");
    return pullback(std::move(base), [t](std::span<const double> x) { return t.forward(x); },
                    "A(r=" + std::to_string(t.r) + ",d=" + std::to_string(t.d) + ")");
}

WeightSpec WeightSpec::pullback_inverse(WeightSpec base, const PhaseSpaceTransform& t) {
    if (base.dim() != t.vec_len())
        throw std::invalid_argument("pullback: weight dimension does not match transform");
    return pullback(std::move(base), [t](std::span<const double> x) { return t.inverse(x); },
                    "B(r=" + std::to_string(t.r) + ",d=" + std::to_string(t.d) + ")");
}

WeightSpec WeightSpec::v_split(double s1, double s2, int d) {
    WeightSpec w;
    w.dim_ = 3 * d;
    w.text_ = "v(s1=" + std::to_string(s1) + ",s2=" + std::to_string(s2) + ")";
    w.fn_ = [s1, s2, d](std::span<const double> z) {
        const std::size_t dd = static_cast<std::size_t>(d);
        return bracket_pow(z.subspan(0, dd), s2) * bracket_pow(z.subspan(dd, dd), s1) *
               bracket_pow(z.subspan(2 * dd, dd), s2);
    };
    return w;
}

double WeightSpec::eval(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim_)
        throw std::invalid_argument("WeightSpec::eval: dimension mismatch");
    return fn_(x);
}

double moderate_ratio(const WeightSpec& w, double s, std::span<const double> x,
                      std::span<const double> y) {
    std::vector<double> xy(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) xy[i] = x[i] + y[i];
    return w.eval(xy) / (bracket_pow(x, s) * w.eval(y));
}

ModerateReport check_s_moderate(const WeightSpec& w, double s, int sample_count, double box,
                                std::uint64_t seed) {
    if (sample_count < 1) throw std::invalid_argument("check_s_moderate: sample_count >= 1");
    const int n = w.dim();
    ModerateReport rep;

    auto consider = [&](std::span<const double> x, std::span<const double> y) {
        const double r = moderate_ratio(w, s, x, y);
        if (r > rep.constant) rep.constant = r;
    };

    std::vector<double> x(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n));

    if (box >= 1.0) {
        // unit pair along the first axis
        std::fill(x.begin(), x.end(), 0.0);
        std::fill(y.begin(), y.end(), 0.0);
        x[0] = 1.0;
        y[0] = 1.0;
        consider(x, y);
    }

    // coarse pair lattice along each axis pair, then seeded uniform pairs
    const int q = 5;
    for (int axis = 0; axis < n; ++axis) {
        for (int ix = 0; ix < q; ++ix)
            for (int iy = 0; iy < q; ++iy) {
                std::fill(x.begin(), x.end(), 0.0);
                std::fill(y.begin(), y.end(), 0.0);
                x[static_cast<std::size_t>(axis)] = -box + 2.0 * box * ix / (q - 1);
                y[static_cast<std::size_t>(axis)] = -box + 2.0 * box * iy / (q - 1);
                consider(x, y);
            }
    }

    Rng rng(seed);
    for (int t = 0; t < sample_count; ++t) {
        for (int a = 0; a < n; ++a) {
            x[static_cast<std::size_t>(a)] = rng.uniform(-box, box);
            y[static_cast<std::size_t>(a)] = rng.uniform(-box, box);
        }
        consider(x, y);
    }

    rep.pass = std::isfinite(rep.constant);
    return rep;
}

} // namespace tfio
