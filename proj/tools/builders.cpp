#include "builders.hpp"

#include "tfio/rng.hpp"

#include <cmath>
#include <numbers>

namespace tfio::cli {

namespace {

[[noreturn]] void unknown(const std::string& what, const Term& t) {
    throw std::runtime_error("unresolved " + what + " name: '" + t.serialize() + "'");
}

double arg_number(const Term& t, std::size_t i, const char* name) {
    if (i < t.items.size()) return t.items[i].as_number();
    if (const Term* kw = t.kwarg(name)) return kw->as_number();
    throw std::runtime_error("'" + t.text + "' needs argument '" + name + "'");
}

double arg_number_or(const Term& t, std::size_t i, const char* name, double fallback) {
    if (i < t.items.size()) return t.items[i].as_number();
    if (const Term* kw = t.kwarg(name)) return kw->as_number();
    return fallback;
}

} // namespace

UniformGrid grid_from(const ExperimentConfig& cfg) {
    return UniformGrid(cfg.integer("d", 1), cfg.integer("N"), cfg.number("R"));
}

SymbolSpec resolve_symbol(const Term& t, int arity, int dim) {
    const std::string& name = t.kind == Term::Kind::Call ? t.text
                              : t.kind == Term::Kind::Ident ? t.text
                                                            : "";
    if (name == "one") return symbol_one(arity, dim);
    if (name == "gauss") return symbol_gaussian(arity, dim);
    if (name == "sg") {
        if (arity != 2) throw std::runtime_error("sg(...) symbols are bilinear");
        return symbol_sg_power(arg_number(t, 0, "m1"), arg_number(t, 1, "m2"),
                               arg_number(t, 2, "m3"));
    }
    if (name == "bracket") {
        std::vector<double> exps;
        for (const auto& a : t.items) exps.push_back(a.as_number());
        if (static_cast<int>(exps.size()) != arity + 1)
            throw std::runtime_error("bracket(...) needs one exponent per variable block");
        return symbol_bracket_powers(std::move(exps), dim);
    }
    if (name == "peaked") return symbol_peaked(arg_number(t, 0, "a"), arity, dim);
    if (name == "rand")
        return symbol_random_trig(arity, dim,
                                  static_cast<int>(arg_number_or(t, 0, "waves", 4)),
                                  arg_number_or(t, 1, "amp", 1.0),
                                  static_cast<std::uint64_t>(arg_number_or(t, 2, "seed", 1)));
    if (name == "tbracket") return torus_symbol_bracket(arg_number(t, 0, "m"), arity);
    unknown("symbol", t);
}

PhaseSpec resolve_phase(const Term& t, int dim) {
    const std::string& name = t.text;
    if (name == "phase.zero") return phase_zero(dim);
    if (name == "phase.linear") return phase_linear(dim);
    if (name == "phase.shifted") return phase_shifted(arg_number(t, 0, "c"), dim);
    if (name == "phase.perturbed") return phase_perturbed(arg_number(t, 0, "eps"), dim);
    unknown("phase", t);
}

std::vector<PhaseSpec> resolve_phases(const ExperimentConfig& cfg, int arity, int dim) {
    std::vector<PhaseSpec> out;
    if (const Term* t = cfg.find("phases")) {
        if (t->kind != Term::Kind::List)
            throw std::runtime_error("config: 'phases' must be a list");
        for (const auto& item : t->items) out.push_back(resolve_phase(item, dim));
    } else {
        for (int k = 0; k < arity; ++k) out.push_back(phase_linear(dim));
    }
    if (static_cast<int>(out.size()) != arity)
        throw std::runtime_error("config: expected one phase per analyzed argument");
    return out;
}

WeightSpec resolve_weight(const Term& t, int dim_hint) {
    const std::string& name = t.text;
    if (name == "one") return WeightSpec::one(dim_hint);
    if (name == "omega")
        return WeightSpec::omega(arg_number(t, 0, "s"),
                                 static_cast<int>(arg_number_or(t, 1, "dim", dim_hint)));
    if (name == "v")
        return WeightSpec::v_split(arg_number(t, 0, "s1"), arg_number(t, 1, "s2"),
                                   static_cast<int>(arg_number_or(t, 2, "d", dim_hint / 3)));
    if (name == "tensor") {
        std::vector<WeightSpec> factors;
        int used = 0;
        for (const auto& a : t.items) {
            // children must pin their own dimension; split the hint evenly
            const int child_hint = static_cast<int>(t.items.size()) > 0
                                       ? dim_hint / static_cast<int>(t.items.size())
                                       : dim_hint;
            factors.push_back(resolve_weight(a, child_hint));
            used += factors.back().dim();
        }
        if (used != dim_hint)
            throw std::runtime_error("tensor(...) weight dimensions sum to " +
                                     std::to_string(used) + ", expected " +
                                     std::to_string(dim_hint));
        return WeightSpec::tensor(std::move(factors));
    }
    if (name == "pullbackA" || name == "pullbackB") {
        const PhaseSpaceTransform tr{static_cast<int>(arg_number(t, 0, "r")),
                                     static_cast<int>(arg_number(t, 1, "d"))};
        if (t.items.size() < 3) throw std::runtime_error("pullback needs a base weight");
        WeightSpec base = resolve_weight(t.items[2], tr.vec_len());
        return name == "pullbackA" ? WeightSpec::pullback_forward(std::move(base), tr)
                                   : WeightSpec::pullback_inverse(std::move(base), tr);
    }
    unknown("weight", t);
}

NestedNormSpec resolve_norm_spec(const Term& t) {
    if (t.kind != Term::Kind::Call || t.text != "norm")
        throw std::runtime_error("expected norm(order=[..], exps=[..])");
    const Term* order = t.kwarg("order");
    const Term* exps = t.kwarg("exps");
    if (!order || !exps || order->kind != Term::Kind::List || exps->kind != Term::Kind::List)
        throw std::runtime_error("norm(...) needs list arguments 'order' and 'exps'");
    NestedNormSpec spec;
    for (const auto& o : order->items) spec.index_order.push_back(o.text);
    for (const auto& e : exps->items) spec.exponents.push_back(e.as_exponent());
    if (spec.index_order.size() != spec.exponents.size())
        throw std::runtime_error("norm(...): order and exps lengths differ");
    return spec;
}

SampledField resolve_signal(const Term& t, const UniformGrid& g, std::uint64_t seed) {
    const std::string& name = t.text;
    constexpr double pi = std::numbers::pi;
    if (name == "gaussian") {
        SampledField f({g});
        const auto shape = f.shape();
        std::vector<int> idx(shape.size());
        for (std::size_t j = 0; j < f.size(); ++j) {
            unflatten(j, shape, idx);
            double v = 1.0;
            for (std::size_t a = 0; a < shape.size(); ++a) {
                const double x = g.coord(idx[a]);
                v *= std::pow(2.0, 0.25) * std::exp(-pi * x * x);
            }
            f.data[j] = v;
        }
        return f;
    }
    if (name == "harmonic") {
        const double a = arg_number(t, 0, "a");
        SampledField f({g});
        const auto shape = f.shape();
        std::vector<int> idx(shape.size());
        for (std::size_t j = 0; j < f.size(); ++j) {
            unflatten(j, shape, idx);
            double phase = 0;
            for (std::size_t ax = 0; ax < shape.size(); ++ax) phase += a * g.coord(idx[ax]);
            f.data[j] = std::polar(1.0, 2 * pi * phase);
        }
        return f;
    }
    if (name == "random") {
        const double band = arg_number_or(t, 0, "band", 1.0);
        const double width = arg_number_or(t, 1, "width", 2.0);
        const std::uint64_t s =
            static_cast<std::uint64_t>(arg_number_or(t, 2, "seed", static_cast<double>(seed)));
        Rng rng(s);
        const int waves = 8;
        const double dxi = g.dual().spacing();
        const int kmax = std::max(1, static_cast<int>(band / dxi));
        std::vector<cplx> amps;
        std::vector<double> freqs;
        for (int w = 0; w < waves; ++w) {
            amps.push_back(rng.complex_gaussian());
            freqs.push_back(dxi * (static_cast<int>(rng.next_u64() %
                                                    static_cast<std::uint64_t>(2 * kmax + 1)) -
                                   kmax));
        }
        SampledField f({g});
        const auto shape = f.shape();
        std::vector<int> idx(shape.size());
        for (std::size_t j = 0; j < f.size(); ++j) {
            unflatten(j, shape, idx);
            const double x = g.coord(idx[0]);
            cplx v{0, 0};
            for (int w = 0; w < waves; ++w)
                v += amps[static_cast<std::size_t>(w)] * std::polar(1.0, 2 * pi * freqs[static_cast<std::size_t>(w)] * x);
            f.data[j] = v * std::exp(-pi * (x / width) * (x / width));
        }
        return f;
    }
    unknown("signal", t);
}

GaborSystem system_from(const ExperimentConfig& cfg, const UniformGrid& g) {
    const double alpha = cfg.number("alpha", 0.5);
    const double beta = cfg.number("beta", 0.5);
    // full band/window coverage unless ranges are pinned
    const double h = g.spacing();
    const double dxi = g.dual().spacing();
    const int ts = static_cast<int>(std::lround(alpha / h));
    const int fs = static_cast<int>(std::lround(beta / dxi));
    const int mr = cfg.integer("m_range", ts > 0 ? g.points / (2 * ts) : 1);
    const int nr = cfg.integer("n_range", fs > 0 ? g.points / (2 * fs) : 1);
    const Term* wt = cfg.find("window");
    Term gaussian_term;
    gaussian_term.kind = Term::Kind::Ident;
    gaussian_term.text = "gaussian";
    SampledField w = resolve_signal(wt ? *wt : gaussian_term, g, 1);
    return GaborSystem(std::move(w), alpha, beta, mr, nr);
}

double exponent_from(const ExperimentConfig& cfg, const std::string& key, double fallback) {
    const Term* t = cfg.find(key);
    if (!t) return fallback;
    return t->as_exponent();
}

} // namespace tfio::cli
