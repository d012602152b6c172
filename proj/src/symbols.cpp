#include "tfio/symbols.hpp"

#include "tfio/rng.hpp"
#include "tfio/weights.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace tfio {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double pi = std::numbers::pi;

// ---- univariate term calculus: c * z^p * (1+z^2)^q * exp(-pi z^2)^e ----
// Closed under differentiation, which is all the built-in amplitudes need to
// expose analytic derivatives of every order.

struct Term {
    double c = 0;
    int p = 0;
    double q = 0;
    int e = 0;
};
using Factor = std::vector<Term>;

Factor d_dz(const Factor& f) {
    Factor out;
    for (const Term& t : f) {
        if (t.p != 0) out.push_back({t.c * t.p, t.p - 1, t.q, t.e});
        if (t.q != 0.0) out.push_back({t.c * 2.0 * t.q, t.p + 1, t.q - 1.0, t.e});
        if (t.e != 0) out.push_back({t.c * (-2.0 * pi * t.e), t.p + 1, t.q, t.e});
    }
    return out;
}

double eval_factor(const Factor& f, double z) {
    double s = 0;
    for (const Term& t : f) {
        double v = t.c;
        for (int i = 0; i < t.p; ++i) v *= z;
        if (t.q != 0.0) v *= std::pow(1.0 + z * z, t.q);
        if (t.e != 0) v *= std::exp(-pi * t.e * z * z);
        s += v;
    }
    return s;
}

// product of one Factor per scalar coordinate
struct ProductSymbol {
    std::vector<Factor> factors;

    double eval(std::span<const double> z) const {
        double v = 1.0;
        for (std::size_t i = 0; i < factors.size(); ++i) v *= eval_factor(factors[i], z[i]);
        return v;
    }
    double deriv(std::span<const int> alpha, std::span<const double> z) const {
        double v = 1.0;
        for (std::size_t i = 0; i < factors.size(); ++i) {
            Factor f = factors[i];
            for (int k = 0; k < alpha[i]; ++k) f = d_dz(f);
            v *= eval_factor(f, z[i]);
        }
        return v;
    }
};

SymbolSpec from_product(ProductSymbol ps, int r, int d, std::string name) {
    auto shared = std::make_shared<ProductSymbol>(std::move(ps));
    SymbolSpec s;
    s.arity = r;
    s.dim = d;
    s.name = std::move(name);
    s.eval = [shared](std::span<const double> z) { return cplx{shared->eval(z), 0.0}; };
    s.deriv = [shared](std::span<const int> a, std::span<const double> z) {
        return cplx{shared->deriv(a, z), 0.0};
    };
    return s;
}

Factor one_factor() { return {Term{1.0, 0, 0.0, 0}}; }
Factor bracket_factor(double m) { return {Term{1.0, 0, 0.5 * m, 0}}; }
Factor gauss_factor() { return {Term{1.0, 0, 0.0, 1}}; }

} // namespace

SymbolSpec symbol_one(int r, int d) {
    ProductSymbol ps;
    ps.factors.assign(static_cast<std::size_t>(d * (r + 1)), one_factor());
    SymbolSpec s = from_product(std::move(ps), r, d, "one");
    s.x_only = true;
    s.constant = true;
    s.symbol_class = {SymbolClass::Kind::SG, {0, 0, 0}, 1.0, 0.0, {0, 0, 0}};
    return s;
}

SymbolSpec symbol_bracket_powers(std::vector<double> exponents, int d) {
    if (d != 1)
        throw std::invalid_argument("symbol_bracket_powers: analytic derivatives provided for d=1 only");
    ProductSymbol ps;
    for (double e : exponents) ps.factors.push_back(e == 0.0 ? one_factor() : bracket_factor(e));
    const int r = static_cast<int>(exponents.size()) - 1;
    std::ostringstream nm;
    nm << "bracket(";
    for (std::size_t i = 0; i < exponents.size(); ++i) nm << (i ? "," : "") << exponents[i];
    nm << ")";
    SymbolSpec s = from_product(std::move(ps), r, d, nm.str());
    bool xo = true;
    for (std::size_t i = 1; i < exponents.size(); ++i) xo = xo && exponents[i] == 0.0;
    s.x_only = xo;
    return s;
}

SymbolSpec symbol_sg_power(double m1, double m2, double m3) {
    SymbolSpec s = symbol_bracket_powers({m3, m1, m2}, 1);
    s.symbol_class = {SymbolClass::Kind::SG, {m1, m2, m3}, 1.0, 0.0, {0, 0, 0}};
    std::ostringstream nm;
    nm << "sg(" << m1 << "," << m2 << "," << m3 << ")";
    s.name = nm.str();
    return s;
}

SymbolSpec symbol_peaked(double a, int r, int d) {
    std::vector<double> exps(static_cast<std::size_t>(r + 1), -a);
    exps[0] = 0.0;
    SymbolSpec s = symbol_bracket_powers(std::move(exps), d);
    std::ostringstream nm;
    nm << "peaked(" << a << ")";
    s.name = nm.str();
    return s;
}

SymbolSpec symbol_gaussian(int r, int d) {
    ProductSymbol ps;
    ps.factors.assign(static_cast<std::size_t>(d * (r + 1)), gauss_factor());
    return from_product(std::move(ps), r, d, "gauss");
}

SymbolSpec symbol_random_trig(int r, int d, int waves, double amp, std::uint64_t seed) {
    struct Wave {
        cplx a;
        std::vector<double> w;
    };
    auto ws = std::make_shared<std::vector<Wave>>();
    Rng rng(seed);
    const int n = d * (r + 1);
    for (int k = 0; k < waves; ++k) {
        Wave w;
        w.a = amp * rng.complex_gaussian() / std::sqrt(2.0 * waves);
        w.w.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) w.w[static_cast<std::size_t>(i)] = rng.uniform(-0.25, 0.25);
        ws->push_back(std::move(w));
    }
    SymbolSpec s;
    s.arity = r;
    s.dim = d;
    std::ostringstream nm;
    nm << "rand(waves=" << waves << ",amp=" << amp << ",seed=" << seed << ")";
    s.name = nm.str();
    s.eval = [ws, n](std::span<const double> z) {
        cplx v{0, 0};
        for (const auto& w : *ws) {
            double ph = 0;
            for (int i = 0; i < n; ++i) ph += w.w[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(i)];
            v += w.a * std::polar(1.0, two_pi * ph);
        }
        return v;
    };
    s.deriv = [ws, n](std::span<const int> a, std::span<const double> z) {
        cplx v{0, 0};
        for (const auto& w : *ws) {
            double ph = 0;
            cplx coef{1, 0};
            for (int i = 0; i < n; ++i) {
                ph += w.w[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(i)];
                for (int k = 0; k < a[static_cast<std::size_t>(i)]; ++k)
                    coef *= cplx{0, two_pi * w.w[static_cast<std::size_t>(i)]};
            }
            v += coef * w.a * std::polar(1.0, two_pi * ph);
        }
        return v;
    };
    // uniformly bounded derivatives of every order
    s.symbol_class = {SymbolClass::Kind::SG, {0, 0, 0}, 1.0, 0.0, {0, 0, 0}};
    return s;
}

SymbolSpec torus_symbol_bracket(double m, int r) {
    SymbolSpec s;
    s.arity = r;
    s.dim = 1;
    s.torus = true;
    std::ostringstream nm;
    nm << "tbracket(" << m << ")";
    s.name = nm.str();
    s.eval = [m, r](std::span<const double> z) {
        double v = 1.0;
        for (int k = 1; k <= r; ++k) v *= bracket_pow(z[static_cast<std::size_t>(k)], m);
        return cplx{v, 0.0};
    };
    s.symbol_class = {SymbolClass::Kind::TorusHormander, std::vector<double>(static_cast<std::size_t>(r), m),
                      1.0, 0.0, {0, 0, 0}};
    return s;
}

PhaseSpec phase_zero(int d) {
    PhaseSpec p;
    p.dim = d;
    p.var_count = 2;
    p.name = "phase.zero";
    p.eval = [](std::span<const double>) { return 0.0; };
    p.gradient = [](std::span<const double> z, std::span<double> g) {
        std::fill(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(z.size()), 0.0);
    };
    p.linear_in_second = true;
    p.degree_two_bound = 0.0;
    return p;
}

PhaseSpec phase_linear(int d) {
    PhaseSpec p;
    p.dim = d;
    p.var_count = 2;
    p.name = "phase.linear";
    p.eval = [d](std::span<const double> z) {
        double s = 0;
        for (int a = 0; a < d; ++a) s += z[static_cast<std::size_t>(a)] * z[static_cast<std::size_t>(d + a)];
        return s;
    };
    p.gradient = [d](std::span<const double> z, std::span<double> g) {
        for (int a = 0; a < d; ++a) {
            g[static_cast<std::size_t>(a)] = z[static_cast<std::size_t>(d + a)];
            g[static_cast<std::size_t>(d + a)] = z[static_cast<std::size_t>(a)];
        }
    };
    p.linear_in_second = true;
    p.standard_linear = true;
    p.degree_two_bound = 1.0;
    return p;
}

PhaseSpec phase_shifted(double c, int d) {
    PhaseSpec p = phase_linear(d);
    std::ostringstream nm;
    nm << "phase.shifted(" << c << ")";
    p.name = nm.str();
    p.standard_linear = false;
    p.eval = [d, c](std::span<const double> z) {
        double s = 0;
        for (int a = 0; a < d; ++a)
            s += (z[static_cast<std::size_t>(a)] + c) * z[static_cast<std::size_t>(d + a)];
        return s;
    };
    p.gradient = [d, c](std::span<const double> z, std::span<double> g) {
        for (int a = 0; a < d; ++a) {
            g[static_cast<std::size_t>(a)] = z[static_cast<std::size_t>(d + a)];
            g[static_cast<std::size_t>(d + a)] = z[static_cast<std::size_t>(a)] + c;
        }
    };
    return p;
}

PhaseSpec phase_perturbed(double eps, int d) {
    PhaseSpec p = phase_linear(d);
    std::ostringstream nm;
    nm << "phase.perturbed(" << eps << ")";
    p.name = nm.str();
    p.standard_linear = false;
    p.linear_in_second = true; // still linear in xi
    p.eval = [d, eps](std::span<const double> z) {
        double s = 0;
        for (int a = 0; a < d; ++a) s += z[static_cast<std::size_t>(a)] * z[static_cast<std::size_t>(d + a)];
        return s + eps * std::sin(z[0]) * z[static_cast<std::size_t>(d)];
    };
    p.gradient = [d, eps](std::span<const double> z, std::span<double> g) {
        for (int a = 0; a < d; ++a) {
            g[static_cast<std::size_t>(a)] = z[static_cast<std::size_t>(d + a)];
            g[static_cast<std::size_t>(d + a)] = z[static_cast<std::size_t>(a)];
        }
        g[0] += eps * std::cos(z[0]) * z[static_cast<std::size_t>(d)];
        g[static_cast<std::size_t>(d)] += eps * std::sin(z[0]);
    };
    p.degree_two_bound = std::max(1.0, std::abs(eps));
    return p;
}

PhaseSpec phase_join_bilinear(const PhaseSpec& p1, const PhaseSpec& p2) {
    if (p1.var_count != 2 || p2.var_count != 2 || p1.dim != p2.dim)
        throw std::invalid_argument("phase_join_bilinear: expects two 2-block phases of equal dimension");
    PhaseSpec p;
    p.dim = p1.dim;
    p.var_count = 3;
    p.name = p1.name + "+" + p2.name;
    const int d = p.dim;
    auto a = std::make_shared<PhaseSpec>(p1);
    auto b = std::make_shared<PhaseSpec>(p2);
    p.eval = [a, b, d](std::span<const double> z) {
        std::vector<double> z1(static_cast<std::size_t>(2 * d)), z2(static_cast<std::size_t>(2 * d));
        for (int i = 0; i < d; ++i) {
            z1[static_cast<std::size_t>(i)] = z[static_cast<std::size_t>(i)];
            z2[static_cast<std::size_t>(i)] = z[static_cast<std::size_t>(i)];
            z1[static_cast<std::size_t>(d + i)] = z[static_cast<std::size_t>(d + i)];
            z2[static_cast<std::size_t>(d + i)] = z[static_cast<std::size_t>(2 * d + i)];
        }
        return a->eval(z1) + b->eval(z2);
    };
    p.gradient = [a, b, d](std::span<const double> z, std::span<double> g) {
        std::vector<double> z1(static_cast<std::size_t>(2 * d)), z2(static_cast<std::size_t>(2 * d));
        std::vector<double> g1(static_cast<std::size_t>(2 * d)), g2(static_cast<std::size_t>(2 * d));
        for (int i = 0; i < d; ++i) {
            z1[static_cast<std::size_t>(i)] = z[static_cast<std::size_t>(i)];
            z2[static_cast<std::size_t>(i)] = z[static_cast<std::size_t>(i)];
            z1[static_cast<std::size_t>(d + i)] = z[static_cast<std::size_t>(d + i)];
            z2[static_cast<std::size_t>(d + i)] = z[static_cast<std::size_t>(2 * d + i)];
        }
        a->gradient(z1, g1);
        b->gradient(z2, g2);
        for (int i = 0; i < d; ++i) {
            g[static_cast<std::size_t>(i)] = g1[static_cast<std::size_t>(i)] + g2[static_cast<std::size_t>(i)];
            g[static_cast<std::size_t>(d + i)] = g1[static_cast<std::size_t>(d + i)];
            g[static_cast<std::size_t>(2 * d + i)] = g2[static_cast<std::size_t>(d + i)];
        }
    };
    p.linear_in_second = p1.linear_in_second && p2.linear_in_second;
    p.standard_linear = p1.standard_linear && p2.standard_linear;
    p.degree_two_bound = p1.degree_two_bound + p2.degree_two_bound;
    return p;
}

SampledField sample_symbol(const SymbolSpec& s, const std::vector<UniformGrid>& grids) {
    if (static_cast<int>(grids.size()) != s.arity + 1)
        throw std::invalid_argument("sample_symbol: expected one grid per variable block");
    for (const auto& g : grids)
        if (g.dim != s.dim) throw std::invalid_argument("sample_symbol: grid dimension mismatch");

    SampledField out(grids);
    const auto shape = out.shape();
    const int nc = s.coord_count();
    #pragma omp parallel for schedule(static)
    for (long long jj = 0; jj < static_cast<long long>(out.size()); ++jj) {
        const std::size_t j = static_cast<std::size_t>(jj);
        std::vector<double> z(static_cast<std::size_t>(nc));
        coords_of(out, j, z);
        out.data[j] = s.eval(z);
    }
    if (!out.finite()) throw std::runtime_error("sample_symbol: evaluator produced non-finite values");
    return out;
}

namespace {

// iterated central difference, one coordinate at a time
cplx fd_derivative(const SymbolSpec& s, std::span<const int> alpha, std::span<const double> z,
                   double step) {
    int coord = -1;
    for (std::size_t i = 0; i < alpha.size(); ++i)
        if (alpha[i] > 0) { coord = static_cast<int>(i); break; }
    if (coord < 0) return s.eval(z);
    std::vector<int> a(alpha.begin(), alpha.end());
    a[static_cast<std::size_t>(coord)] -= 1;
    std::vector<double> zp(z.begin(), z.end()), zm(z.begin(), z.end());
    zp[static_cast<std::size_t>(coord)] += step;
    zm[static_cast<std::size_t>(coord)] -= step;
    return (fd_derivative(s, a, zp, step) - fd_derivative(s, a, zm, step)) / (2.0 * step);
}

struct DerivSample {
    cplx value;
    bool unstable = false;
};

DerivSample derivative_at(const SymbolSpec& s, std::span<const int> alpha,
                          std::span<const double> z, double box_scale) {
    if (s.deriv) return {s.deriv(alpha, z), false};
    const double h = std::max(box_scale, 1.0) * 1e-4;
    const cplx d1 = fd_derivative(s, alpha, z, h);
    const cplx d2 = fd_derivative(s, alpha, z, 0.5 * h);
    const cplx rich = (4.0 * d2 - d1) / 3.0; // one Richardson refinement
    const double disagree = std::abs(d2 - d1);
    const bool unstable = disagree > 0.25 * std::max({std::abs(d1), std::abs(d2), 1e-12});
    return {rich, unstable};
}

// all per-block multi-indices with |alpha_block| <= cap, d coords per block
void enumerate_block(int d, int cap, std::vector<std::vector<int>>& out) {
    std::vector<int> cur(static_cast<std::size_t>(d), 0);
    // iterate compositions by counting in base (cap+1), filter by sum
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(cap + 1);
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        int sum = 0;
        for (int i = 0; i < d; ++i) {
            cur[static_cast<std::size_t>(i)] = static_cast<int>(c % static_cast<std::size_t>(cap + 1));
            sum += cur[static_cast<std::size_t>(i)];
            c /= static_cast<std::size_t>(cap + 1);
        }
        if (sum <= cap) out.push_back(cur);
    }
}

double class_bound(const SymbolSpec& s, std::span<const int> alpha, std::span<const double> z) {
    const int d = s.dim;
    const int r = s.arity;
    const auto& cls = s.symbol_class;
    auto block_abs = [&](int b) {
        int v = 0;
        for (int i = 0; i < d; ++i) v += alpha[static_cast<std::size_t>(b * d + i)];
        return v;
    };
    auto block_bracket = [&](int b, double e) {
        return bracket_pow(z.subspan(static_cast<std::size_t>(b * d), static_cast<std::size_t>(d)), e);
    };
    switch (cls.kind) {
        case SymbolClass::Kind::Hormander:
        case SymbolClass::Kind::TorusHormander: {
            // prod_{k=1..r} <xi_k>^{m_k - rho |beta_k| + delta |alpha|}
            const int ax = block_abs(0);
            double bound = 1.0;
            for (int k = 1; k <= r; ++k)
                bound *= block_bracket(k, cls.orders[static_cast<std::size_t>(k - 1)] -
                                              cls.rho * block_abs(k) + cls.delta * ax);
            return bound;
        }
        case SymbolClass::Kind::SG: {
            if (r != 2) throw std::invalid_argument("certify_class: SG class is bilinear");
            return block_bracket(0, cls.orders[2] - block_abs(0)) *
                   block_bracket(1, cls.orders[0] - block_abs(1)) *
                   block_bracket(2, cls.orders[1] - block_abs(2));
        }
        case SymbolClass::Kind::Rough: {
            if (r != 2) throw std::invalid_argument("certify_class: rough class is bilinear");
            return block_bracket(0, cls.orders[2]) * block_bracket(1, cls.orders[0]) *
                   block_bracket(2, cls.orders[1]);
        }
        default:
            throw std::invalid_argument("certify_class: symbol has no declared class");
    }
}

} // namespace

CertifyReport certify_class(const SymbolSpec& s, std::span<const int> order_limit, double box,
                            double tol) {
    const int d = s.dim;
    const int r = s.arity;
    if (static_cast<int>(order_limit.size()) != r + 1)
        throw std::invalid_argument("certify_class: order_limit needs one cap per variable block");
    if (s.symbol_class.kind == SymbolClass::Kind::None)
        throw std::invalid_argument("certify_class: symbol has no declared class");

    // order caps; the rough class caps derivatives by its budget
    std::vector<int> caps(order_limit.begin(), order_limit.end());
    if (s.symbol_class.kind == SymbolClass::Kind::Rough) {
        caps[0] = std::min(caps[0], 2 * s.symbol_class.derivative_budget[2]); // x: 2 N3
        caps[1] = std::min(caps[1], 2 * s.symbol_class.derivative_budget[0]); // xi: 2 N1
        if (r >= 2) caps[2] = std::min(caps[2], 2 * s.symbol_class.derivative_budget[1]); // eta: 2 N2
    }

    // multi-index lists per block, then the product
    std::vector<std::vector<std::vector<int>>> per_block(static_cast<std::size_t>(r + 1));
    for (int b = 0; b <= r; ++b) enumerate_block(d, caps[static_cast<std::size_t>(b)], per_block[static_cast<std::size_t>(b)]);

    CertifyReport rep;
    rep.notes =
        "exponent read as m_k - rho|beta_k| + delta|alpha| (display 'm_k - rho|beta_k| + alpha|delta|'); "
        "product over k = 1..r (display 'prod_{k+1}^{r}')";

    const bool torus = s.torus;
    std::vector<std::size_t> idx(static_cast<std::size_t>(r + 1), 0);
    while (true) {
        std::vector<int> alpha;
        for (int b = 0; b <= r; ++b)
            for (int v : per_block[static_cast<std::size_t>(b)][idx[static_cast<std::size_t>(b)]])
                alpha.push_back(v);

        CertifyEntry entry;
        entry.multi_index = alpha;
        SymbolSpec torus_diffed;
        std::vector<int> torus_x_orders;
        if (torus) {
            std::vector<int> beta(alpha.begin() + d, alpha.end());
            torus_diffed = forward_difference(s, beta);
            torus_x_orders.assign(static_cast<std::size_t>(s.coord_count()), 0);
            std::copy(alpha.begin(), alpha.begin() + d, torus_x_orders.begin());
        }
        for (int pass = 0; pass < 2; ++pass) {
            const double bx = pass == 0 ? box : 0.5 * box;
            const int qpts = 7;
            double worst = 0.0;
            std::vector<double> z(static_cast<std::size_t>(s.coord_count()));
            std::vector<int> node(static_cast<std::size_t>(s.coord_count()), 0);
            std::size_t total = 1;
            for (int i = 0; i < s.coord_count(); ++i) total *= static_cast<std::size_t>(qpts);
            for (std::size_t code = 0; code < total; ++code) {
                std::size_t c = code;
                for (int i = 0; i < s.coord_count(); ++i) {
                    node[static_cast<std::size_t>(i)] = static_cast<int>(c % qpts);
                    c /= qpts;
                }
                for (int i = 0; i < s.coord_count(); ++i) {
                    double zi = -bx + 2.0 * bx * node[static_cast<std::size_t>(i)] / (qpts - 1);
                    // frequency coordinates of torus symbols live on the integers
                    if (torus && i >= d) zi = std::round(zi);
                    z[static_cast<std::size_t>(i)] = zi;
                }
                cplx dv;
                if (torus) {
                    // x-block by derivative, frequency blocks by forward difference
                    const DerivSample ds = derivative_at(torus_diffed, torus_x_orders, z, bx);
                    dv = ds.value;
                    entry.fd_unstable = entry.fd_unstable || ds.unstable;
                } else {
                    const DerivSample ds = derivative_at(s, alpha, z, bx);
                    dv = ds.value;
                    entry.fd_unstable = entry.fd_unstable || ds.unstable;
                }
                const double bound = class_bound(s, alpha, z);
                worst = std::max(worst, std::abs(dv) / bound);
            }
            (pass == 0 ? entry.ratio : entry.ratio_half_box) = worst;
        }
        entry.growing = entry.ratio > 1.4 * entry.ratio_half_box + tol;
        rep.entries.push_back(std::move(entry));

        int b = r;
        while (b >= 0) {
            if (++idx[static_cast<std::size_t>(b)] < per_block[static_cast<std::size_t>(b)].size()) break;
            idx[static_cast<std::size_t>(b)] = 0;
            --b;
        }
        if (b < 0) break;
    }

    rep.pass = true;
    for (const auto& e : rep.entries)
        rep.pass = rep.pass && std::isfinite(e.ratio) && !e.growing;
    return rep;
}

SymbolSpec forward_difference(const SymbolSpec& s, std::span<const int> beta) {
    if (!s.torus)
        throw std::invalid_argument("forward_difference: symbol does not have integer frequency arguments");
    const int d = s.dim, r = s.arity;
    if (static_cast<int>(beta.size()) != d * r)
        throw std::invalid_argument("forward_difference: beta must index the frequency coordinates");
    std::vector<int> b(beta.begin(), beta.end());
    auto base = std::make_shared<SymbolSpec>(s);
    SymbolSpec out = s;
    out.name = s.name + ".diff";
    out.deriv = nullptr;
    out.eval = [base, b, d](std::span<const double> z) {
        // expand the iterated difference as a signed binomial sum
        std::function<cplx(std::vector<double>&, std::size_t)> go =
            [&](std::vector<double>& pt, std::size_t coord) -> cplx {
            if (coord == b.size()) return base->eval(pt);
            const int k = b[coord];
            if (k == 0) return go(pt, coord + 1);
            // iterated difference as the signed binomial sum over j steps
            cplx acc{0, 0};
            double saved = pt[static_cast<std::size_t>(d) + coord];
            double binom = 1.0;
            for (int j = 0; j <= k; ++j) {
                // (-1)^{k-j} C(k,j) f(.. + j e)
                pt[static_cast<std::size_t>(d) + coord] = saved + j;
                const cplx v = go(pt, coord + 1);
                const double sign = ((k - j) % 2 == 0) ? 1.0 : -1.0;
                acc += sign * binom * v;
                binom = binom * (k - j) / (j + 1.0);
            }
            pt[static_cast<std::size_t>(d) + coord] = saved;
            return acc;
        };
        std::vector<double> pt(z.begin(), z.end());
        return go(pt, 0);
    };
    return out;
}

PhaseReport phase_checks(const PhaseSpec& p, double box, int samples, std::uint64_t seed) {
    const int n = p.coord_count();
    const int d = p.dim;
    PhaseReport rep;
    Rng rng(seed);

    // analytic gradient vs central differences
    const double hg = 1e-6 * std::max(1.0, box);
    double mismatch = 0.0;
    std::vector<double> z(static_cast<std::size_t>(n)), grad(static_cast<std::size_t>(n));
    for (int t = 0; t < samples; ++t) {
        for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(i)] = rng.uniform(-box, box);
        p.gradient(z, grad);
        for (int i = 0; i < n; ++i) {
            std::vector<double> zp = z, zm = z;
            zp[static_cast<std::size_t>(i)] += hg;
            zm[static_cast<std::size_t>(i)] -= hg;
            const double fd = (p.eval(zp) - p.eval(zm)) / (2 * hg);
            mismatch = std::max(mismatch,
                                std::abs(fd - grad[static_cast<std::size_t>(i)]) /
                                    std::max(1.0, std::abs(grad[static_cast<std::size_t>(i)])));
        }
    }
    rep.gradient_mismatch = mismatch;
    rep.gradient_ok = mismatch <= 1e-6 * 50; // FD truncation allowance

    // Hessian magnitudes and mixed determinants on a coarse box lattice
    const double hh = 1e-5 * std::max(1.0, box);
    const int qpts = 5;
    auto hessian = [&](std::span<const double> at, int i, int j) {
        std::vector<double> zp(at.begin(), at.end()), zm(at.begin(), at.end());
        zp[static_cast<std::size_t>(j)] += hh;
        zm[static_cast<std::size_t>(j)] -= hh;
        std::vector<double> gp(static_cast<std::size_t>(n)), gm(static_cast<std::size_t>(n));
        p.gradient(zp, gp);
        p.gradient(zm, gm);
        return (gp[static_cast<std::size_t>(i)] - gm[static_cast<std::size_t>(i)]) / (2 * hh);
    };

    double min_det = INFINITY;
    double max2 = 0.0, max3 = 0.0;
    std::size_t total = 1;
    for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(qpts);
    std::vector<int> node(static_cast<std::size_t>(n));
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        for (int i = 0; i < n; ++i) {
            node[static_cast<std::size_t>(i)] = static_cast<int>(c % qpts);
            c /= qpts;
        }
        for (int i = 0; i < n; ++i)
            z[static_cast<std::size_t>(i)] = -box + 2.0 * box * node[static_cast<std::size_t>(i)] / (qpts - 1);

        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) max2 = std::max(max2, std::abs(hessian(z, i, j)));

        // third order along each coordinate triple sampled sparsely
        for (int i = 0; i < n; ++i) {
            std::vector<double> zp = z, zm = z;
            zp[static_cast<std::size_t>(i)] += hh;
            zm[static_cast<std::size_t>(i)] -= hh;
            for (int j = 0; j < n; ++j) {
                const double d3 = (hessian(zp, i, j) - hessian(zm, i, j)) / (2 * hh);
                max3 = std::max(max3, std::abs(d3));
            }
        }

        auto block_det = [&](int xi_block) {
            if (d == 1) return std::abs(hessian(z, 0, xi_block * d));
            // general d: Leibniz over the small d x d block
            std::vector<double> H(static_cast<std::size_t>(d * d));
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    H[static_cast<std::size_t>(i * d + j)] = hessian(z, i, xi_block * d + j);
            // d <= 3 in practice
            if (d == 2)
                return std::abs(H[0] * H[3] - H[1] * H[2]);
            if (d == 3)
                return std::abs(H[0] * (H[4] * H[8] - H[5] * H[7]) - H[1] * (H[3] * H[8] - H[5] * H[6]) +
                                H[2] * (H[3] * H[7] - H[4] * H[6]));
            throw std::invalid_argument("phase_checks: dimension too large for the determinant sweep");
        };
        min_det = std::min(min_det, block_det(1));
        if (p.var_count == 3) min_det = std::min(min_det, block_det(2));
    }
    rep.max_second = max2;
    rep.max_third = max3;
    rep.delta_estimate = std::isfinite(min_det) ? min_det : 0.0;
    rep.degenerate = rep.delta_estimate < 1e-12;
    return rep;
}

} // namespace tfio
