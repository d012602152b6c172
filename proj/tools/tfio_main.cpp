#include <CLI11.hpp>

#include "builders.hpp"
#include "tfio/fft.hpp"
#include "tfio/fio.hpp"
#include "tfio/io.hpp"
#include "tfio/ref.hpp"
#include "tfio/stft.hpp"
#include "tfio/torus.hpp"
#include "tfio/verify.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <sstream>

using namespace tfio;
using namespace tfio::cli;

namespace {

constexpr const char* kVersion = "tfio 0.1.0";

struct RunContext {
    ExperimentConfig cfg;
    std::string out_path = "out.csv";
    std::uint64_t seed = 1;
    bool log_info = false;

    std::map<std::string, std::string> manifest() const {
        std::ostringstream hash;
        hash << std::hex << cfg.content_hash();
        std::map<std::string, std::string> m;
        m["config"] = hash.str();
        m["seed"] = std::to_string(seed);
        m["version"] = kVersion;
        return m;
    }
};

double hms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

// ---- handlers return the process exit code ----

int run_stft(const RunContext& ctx) {
    const UniformGrid g = grid_from(ctx.cfg);
    const SampledField win = resolve_signal(
        ctx.cfg.find("window") ? ctx.cfg.require("window") : Term{Term::Kind::Ident, 0, "gaussian", {}, {}},
        g, ctx.seed);
    const SampledField f = resolve_signal(ctx.cfg.require("signal"), g, ctx.seed);
    const StftField v = stft(f, win);
    const double p = exponent_from(ctx.cfg, "p", 2), q = exponent_from(ctx.cfg, "q", 2);
    std::optional<WeightSpec> w;
    if (const Term* t = ctx.cfg.find("weight")) w = resolve_weight(*t, 2 * g.dim);

    CsvWriter csv(ctx.out_path);
    if (ctx.cfg.integer("dump", 0) != 0) {
        csv.header({"x", "xi", "re", "im"});
        const std::size_t fc = v.freq_count();
        for (std::size_t ti = 0; ti < v.time_count(); ++ti)
            for (std::size_t fi = 0; fi < fc; ++fi)
                csv.row({v.time_grid.coord(static_cast<int>(ti)),
                         v.freq_grid.coord(static_cast<int>(fi)), v.values[ti * fc + fi].real(),
                         v.values[ti * fc + fi].imag()});
    } else {
        csv.header({"p", "q", "mixed_norm", "window_norm"});
        csv.row({p, q, mixed_norm(v, p, q, w ? &*w : nullptr), v.window_norm});
    }
    csv.manifest(ctx.manifest());
    return 0;
}

int run_norm(const RunContext& ctx) {
    const UniformGrid g = grid_from(ctx.cfg);
    const SampledField win = resolve_signal(
        ctx.cfg.find("window") ? ctx.cfg.require("window") : Term{Term::Kind::Ident, 0, "gaussian", {}, {}},
        g, ctx.seed);
    const SampledField f = resolve_signal(ctx.cfg.require("signal"), g, ctx.seed);
    const double p = exponent_from(ctx.cfg, "p", 2), q = exponent_from(ctx.cfg, "q", 2);
    std::optional<WeightSpec> w;
    if (const Term* t = ctx.cfg.find("weight")) w = resolve_weight(*t, 2 * g.dim);
    CsvWriter csv(ctx.out_path);
    csv.header({"p", "q", "modulation_norm"});
    csv.row({p, q, modulation_norm(f, win, p, q, w ? &*w : nullptr)});
    csv.manifest(ctx.manifest());
    return 0;
}

int run_check_frame(const RunContext& ctx) {
    const UniformGrid g = grid_from(ctx.cfg);
    const GaborSystem sys = system_from(ctx.cfg, g);
    const FrameBounds dense = frame_bounds_dense(sys);

    double residual = INFINITY;
    bool converged = false;
    try {
        const SampledField gamma = dual_window(sys, ctx.cfg.number("tol", 1e-9),
                                               ctx.cfg.integer("max_iter", 400));
        SampledField res = frame_operator(sys, gamma);
        for (std::size_t j = 0; j < res.size(); ++j) res.data[j] -= sys.window.data[j];
        residual = l2_norm(res);
        converged = true;
    } catch (const FrameError&) {
    }

    // infinite-lattice estimate where the Zak picture applies
    double zak_lower = -1, zak_upper = -1;
    if (sys.dim() == 1 && sys.time_step * sys.freq_step == g.points) {
        const FrameBounds zb = frame_bounds_zak(sys);
        zak_lower = zb.lower;
        zak_upper = zb.upper;
    }

    CsvWriter csv(ctx.out_path);
    csv.header({"alpha", "beta", "A", "B", "ratio", "dual_residual", "converged", "zak_A", "zak_B"});
    csv.row({sys.alpha, sys.beta, dense.lower, dense.upper, dense.ratio(), residual,
             static_cast<long>(converged), zak_lower, zak_upper});
    csv.manifest(ctx.manifest());
    const bool expect_frame = ctx.cfg.integer("expect_frame", 1) != 0;
    return (expect_frame == converged) ? 0 : 1;
}

FioProblem problem_from(const RunContext& ctx, const UniformGrid& g) {
    const int r = ctx.cfg.integer("r", 1);
    SymbolSpec sym = resolve_symbol(ctx.cfg.require("symbol"), r, g.dim);
    return FioProblem(std::move(sym), resolve_phases(ctx.cfg, r, g.dim), g);
}

int run_fio_apply(const RunContext& ctx) {
    const UniformGrid g = grid_from(ctx.cfg);
    const FioProblem p = problem_from(ctx, g);
    const Term* inputs_term = ctx.cfg.find("inputs");
    if (!inputs_term || inputs_term->kind != Term::Kind::List ||
        static_cast<int>(inputs_term->items.size()) != p.arity())
        throw std::runtime_error("config: 'inputs' must list one signal per argument");
    std::vector<SampledField> inputs;
    for (std::size_t k = 0; k < inputs_term->items.size(); ++k)
        inputs.push_back(resolve_signal(inputs_term->items[k], g, ctx.seed + k));
    const SampledField out = fio_apply(p, inputs);

    const std::string field_path = ctx.out_path + ".field";
    write_field(field_path, out);
    CsvWriter csv(ctx.out_path);
    csv.header({"r", "l2_norm", "max_abs", "field_file"});
    double mx = 0;
    for (const auto& z : out.data) mx = std::max(mx, std::abs(z));
    csv.row({static_cast<long>(p.arity()), l2_norm(out), mx, field_path});
    csv.manifest(ctx.manifest());
    return 0;
}

int run_fio_kernel(const RunContext& ctx) {
    const UniformGrid g = grid_from(ctx.cfg);
    const FioProblem p = problem_from(ctx, g);
    const KernelField k = kernel_from_symbol(p);
    const std::string field_path = ctx.out_path + ".field";
    write_field(field_path, k.data);
    CsvWriter csv(ctx.out_path);
    csv.header({"r", "l2_norm", "max_abs", "field_file"});
    double mx = 0;
    for (const auto& z : k.data.data) mx = std::max(mx, std::abs(z));
    csv.row({static_cast<long>(p.arity()), l2_norm(k.data), mx, field_path});
    csv.manifest(ctx.manifest());
    return 0;
}

int run_fio_matrix(const RunContext& ctx) {
    const UniformGrid g = grid_from(ctx.cfg);
    const FioProblem p = problem_from(ctx, g);
    const GaborSystem sys = system_from(ctx.cfg, g);
    const CoefficientTensor b = gabor_matrix(p, sys);

    CsvWriter csv(ctx.out_path);
    const bool dump = ctx.cfg.integer("dump", 0) != 0 &&
                      b.size() <= static_cast<std::size_t>(ctx.cfg.integer("dump_cap", 100000));
    if (dump) {
        std::vector<std::string> cols;
        for (const auto& gi : b.indices)
            for (int a = 0; a < gi.dim; ++a)
                cols.push_back(gi.dim == 1 ? gi.name : gi.name + "_" + std::to_string(a));
        cols.push_back("re");
        cols.push_back("im");
        csv.header(cols);
        std::vector<int> idx(static_cast<std::size_t>(b.shape().size()));
        for (std::size_t j = 0; j < b.size(); ++j) {
            b.decode(j, idx);
            std::vector<std::variant<std::string, double, long>> row;
            for (int v : idx) row.emplace_back(static_cast<long>(v));
            row.emplace_back(b.data[j].real());
            row.emplace_back(b.data[j].imag());
            csv.row(row);
        }
    } else {
        double mx = 0;
        for (const auto& z : b.data) mx = std::max(mx, std::abs(z));
        if (const Term* t = ctx.cfg.find("nested_norm")) {
            const NestedNormSpec spec = resolve_norm_spec(*t);
            csv.header({"entries", "max_abs", "l1", "nested_norm"});
            csv.row({static_cast<long>(b.size()), mx, b.l1_norm(), nested_mixed_norm(b, spec)});
        } else {
            csv.header({"entries", "max_abs", "l1"});
            csv.row({static_cast<long>(b.size()), mx, b.l1_norm()});
        }
    }
    csv.manifest(ctx.manifest());
    return 0;
}

int run_torus_apply(const RunContext& ctx) {
    const int cutoff = ctx.cfg.integer("cutoff");
    const int r = ctx.cfg.integer("r", 1);
    const int nx = ctx.cfg.integer("x_points", 4 * cutoff + 4);
    const UniformGrid xg(1, nx, 0.5);
    const TorusSymbol sym = [&] {
        SymbolSpec s = resolve_symbol(ctx.cfg.require("symbol"), r, 1);
        if (s.torus) return torus_symbol_from(s);
        TorusSymbol w;
        w.arity = r;
        w.dim = 1;
        auto base = std::make_shared<SymbolSpec>(std::move(s));
        w.eval = [base](std::span<const double> x, std::span<const int> k) {
            std::vector<double> z(x.begin(), x.end());
            for (int v : k) z.push_back(static_cast<double>(v));
            return base->eval(z);
        };
        return w;
    }();
    const auto phases = resolve_phases(ctx.cfg, r, 1);
    std::vector<TorusSignal> inputs;
    for (int k = 0; k < r; ++k)
        inputs.push_back(torus_random(1, cutoff, ctx.cfg.number("decay", 1.0),
                                      ctx.seed + static_cast<std::uint64_t>(k)));
    const SampledField out = torus_fio_apply(sym, phases, inputs, xg);
    const TorusSignal coeffs = torus_coefficients(out, std::min(r * cutoff, (nx - 2) / 2));

    CsvWriter csv(ctx.out_path);
    csv.header({"k", "re", "im"});
    for (int k = -coeffs.cutoff; k <= coeffs.cutoff; ++k) {
        const cplx z = coeffs.coeffs[static_cast<std::size_t>(k + coeffs.cutoff)];
        csv.row({static_cast<long>(k), z.real(), z.imag()});
    }
    csv.manifest(ctx.manifest());
    return 0;
}

int run_torus_kernel(const RunContext& ctx) {
    const int cutoff = ctx.cfg.integer("cutoff");
    const int r = ctx.cfg.integer("r", 1);
    const int nx = ctx.cfg.integer("x_points", 2 * cutoff + 2);
    const UniformGrid xg(1, nx, 0.5), yg(1, nx, 0.5);
    SymbolSpec s = resolve_symbol(ctx.cfg.require("symbol"), r, 1);
    const TorusSymbol sym = s.torus ? torus_symbol_from(s) : [&] {
        TorusSymbol w;
        w.arity = r;
        w.dim = 1;
        auto base = std::make_shared<SymbolSpec>(std::move(s));
        w.eval = [base](std::span<const double> x, std::span<const int> k) {
            std::vector<double> z(x.begin(), x.end());
            for (int v : k) z.push_back(static_cast<double>(v));
            return base->eval(z);
        };
        return w;
    }();
    const auto phases = resolve_phases(ctx.cfg, r, 1);
    const KernelField k = torus_kernel(sym, phases, cutoff, xg, yg);
    const std::string field_path = ctx.out_path + ".field";
    write_field(field_path, k.data);
    CsvWriter csv(ctx.out_path);
    csv.header({"cutoff", "l2_norm", "max_abs", "field_file"});
    double mx = 0;
    for (const auto& z : k.data.data) mx = std::max(mx, std::abs(z));
    csv.row({static_cast<long>(cutoff), l2_norm(k.data), mx, field_path});
    csv.manifest(ctx.manifest());
    return 0;
}

int run_verify_stft_relation(const RunContext& ctx) {
    const UniformGrid g = grid_from(ctx.cfg);
    const FioProblem p = problem_from(ctx, g);
    std::vector<UniformGrid> blocks(static_cast<std::size_t>(p.arity() + 1), g);
    SampledField window(blocks);
    {
        const auto shape = window.shape();
        std::vector<int> idx(shape.size());
        for (std::size_t j = 0; j < window.size(); ++j) {
            unflatten(j, shape, idx);
            double v = 1.0;
            for (std::size_t a = 0; a < shape.size(); ++a) {
                const double x = g.coord(idx[a]);
                v *= std::pow(2.0, 0.25) * std::exp(-std::numbers::pi * x * x);
            }
            window.data[j] = v;
        }
    }
    const auto rep = verify_kernel_symbol_stft(p, window, ctx.cfg.integer("samples", 100), ctx.seed);
    const double tol = ctx.cfg.number("tol", 1e-5);
    CsvWriter csv(ctx.out_path);
    csv.header({"samples", "max_deviation", "max_snap", "tol", "pass"});
    csv.row({static_cast<long>(rep.sample_count), rep.max_deviation, rep.max_snap, tol,
             static_cast<long>(rep.max_deviation <= tol)});
    csv.manifest(ctx.manifest());
    return rep.max_deviation <= tol ? 0 : 1;
}

int run_verify_bound(const RunContext& ctx) {
    const UniformGrid g = grid_from(ctx.cfg);
    const GaborSystem small = [&] {
        GaborSystem s = system_from(ctx.cfg, g);
        const int rs = ctx.cfg.integer("radius_small", 8);
        return GaborSystem(s.window, s.alpha, s.beta, rs, rs);
    }();
    const GaborSystem large = [&] {
        GaborSystem s = system_from(ctx.cfg, g);
        const int rl = ctx.cfg.integer("radius_large", 16);
        return GaborSystem(s.window, s.alpha, s.beta, rl, rl);
    }();
    const SampledField win = resolve_signal(Term{Term::Kind::Ident, 0, "gaussian", {}, {}}, g, 1);

    const std::string op_name = ctx.cfg.ident("operator", "pdo");
    std::function<SampledField(std::span<const SampledField>)> op;
    int arity = 2;
    if (op_name == "pdo") {
        SymbolSpec sym = resolve_symbol(ctx.cfg.require("symbol"), 2, g.dim);
        auto compiled = std::make_shared<FioOperator>(
            FioProblem(std::move(sym), {phase_linear(g.dim), phase_linear(g.dim)}, g));
        op = [compiled](std::span<const SampledField> in) { return compiled->apply(in); };
    } else if (op_name == "rankone") {
        auto phi = std::make_shared<SampledField>(
            resolve_signal(Term{Term::Kind::Ident, 0, "gaussian", {}, {}}, g, 1));
        op = [phi, &g](std::span<const SampledField> in) {
            cplx c1{0, 0}, c2{0, 0};
            for (std::size_t j = 0; j < phi->size(); ++j) {
                c1 += in[0].data[j] * phi->data[j];
                c2 += in[1].data[j] * phi->data[j];
            }
            const double cell = cell_measure(phi->blocks);
            c1 *= cell;
            c2 *= cell;
            SampledField out = *phi;
            for (auto& z : out.data) z *= c1 * c2;
            return out;
        };
    } else {
        throw std::runtime_error("unresolved operator name: '" + op_name + "'");
    }

    const double p1 = exponent_from(ctx.cfg, "p1", 2), q1 = exponent_from(ctx.cfg, "q1", 2);
    const double p2 = exponent_from(ctx.cfg, "p2", 2), q2 = exponent_from(ctx.cfg, "q2", 2);
    const double s1 = exponent_from(ctx.cfg, "s1", 1), s2 = exponent_from(ctx.cfg, "s2", 1);
    std::optional<WeightSpec> iw, tw;
    if (const Term* t = ctx.cfg.find("input_weight")) iw = resolve_weight(*t, 2 * g.dim);
    if (const Term* t = ctx.cfg.find("target_weight")) tw = resolve_weight(*t, 2 * g.dim);

    const double pp[2] = {p1, p2}, qq[2] = {q1, q2};
    const auto row = verify_boundedness(
        op, arity, small, large, win, pp, qq, s1, s2, iw ? &*iw : nullptr, tw ? &*tw : nullptr,
        ctx.cfg.integer("trials", 100), ctx.cfg.number("decay", 4.0), ctx.seed, op_name,
        ctx.cfg.integer("plain_l1_target", 0) != 0);

    const double stab_tol = ctx.cfg.number("stability_tol", 0.10);
    const bool pass = std::isfinite(row.max_ratio_large) && row.max_ratio_large > 0 &&
                      row.stability() < stab_tol;
    CsvWriter csv(ctx.out_path);
    csv.header({"operator", "p1", "q1", "p2", "q2", "s1", "s2", "weight", "trials",
                "max_ratio_small", "max_ratio_large", "stability", "pass"});
    csv.row({row.family, p1, q1, p2, q2, s1, s2, row.weight_id,
             static_cast<long>(row.trials), row.max_ratio_small, row.max_ratio_large,
             row.stability(), static_cast<long>(pass)});
    csv.manifest(ctx.manifest());
    return pass ? 0 : 1;
}

int run_verify_decay(const RunContext& ctx, bool pdo) {
    const UniformGrid g = grid_from(ctx.cfg);
    GaborSystem base = system_from(ctx.cfg, g);
    // tighten = 0 scans with the window itself; the decay estimates only ask
    // for a Schwartz window, and the truncated tight window's side bumps can
    // dominate high-order sups
    SampledField w = ctx.cfg.integer("tighten", 0) != 0 ? tighten(base).window : base.window;
    GaborSystem scan(std::move(w), base.alpha, base.beta, ctx.cfg.integer("scan_m", 5),
                     ctx.cfg.integer("scan_n", 3));
    const int radius_small = ctx.cfg.integer("radius_small", scan.m_range - 2);

    DecayReport rep;
    if (pdo) {
        SymbolSpec sym = resolve_symbol(ctx.cfg.require("symbol"), 2, g.dim);
        std::vector<std::array<int, 3>> triples;
        if (const Term* t = ctx.cfg.find("n_list")) {
            for (const auto& item : t->items) {
                const int n = static_cast<int>(item.as_number());
                triples.push_back({n, n, n});
            }
        } else {
            triples = {{1, 1, 1}, {2, 2, 2}};
        }
        rep = verify_decay_pdo(sym, scan, radius_small, triples);
    } else {
        const FioProblem p = problem_from(ctx, g);
        std::vector<int> ns;
        if (const Term* t = ctx.cfg.find("n_list"))
            for (const auto& item : t->items) ns.push_back(static_cast<int>(item.as_number()));
        else ns = {1, 2};
        rep = verify_decay_fio(p, scan, radius_small, ns);
    }

    const double stab_tol = ctx.cfg.number("stability_tol", 0.05);
    bool pass = true;
    CsvWriter csv(ctx.out_path);
    csv.header({"N1", "N2", "N3", "C_small", "C_large", "stability", "joint_C", "consistency",
                "slope_n", "slope_m", "slope_m0", "pass"});
    for (std::size_t i = 0; i < rep.orders.size(); ++i) {
        const bool ok = std::isfinite(rep.c_large[i]) && rep.stability(i) < stab_tol;
        pass = pass && ok;
        csv.row({static_cast<long>(rep.orders[i][0]), static_cast<long>(rep.orders[i][1]),
                 static_cast<long>(rep.orders[i][2]), rep.c_small[i], rep.c_large[i],
                 rep.stability(i), rep.c_joint_large[i], rep.consistency_ratio(i),
                 rep.decay_slopes[0], rep.decay_slopes[1], rep.decay_slopes[2],
                 static_cast<long>(ok)});
    }
    csv.manifest(ctx.manifest());
    return pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"time-frequency operator engine"};
    app.set_version_flag("--version", kVersion);
    app.fallthrough(); // global flags may follow the subcommand

    std::string config_path, out_path = "out.csv";
    std::uint64_t seed = 0;
    int threads = 0;
    app.add_option("--config", config_path, "experiment config file");
    app.add_option("--seed", seed, "seed override (otherwise from config, default 1)");
    app.add_option("--out", out_path, "output CSV path");
    app.add_option("--threads", threads, "OpenMP thread cap");

    // gabor check-frame convenience flags
    double flag_alpha = -1, flag_beta = -1, flag_R = -1;
    int flag_N = -1;
    int flag_cutoff = -1;
    std::string flag_window;

    CLI::App* stft_cmd = app.add_subcommand("stft", "short-time Fourier transform of a signal");
    CLI::App* norm_cmd = app.add_subcommand("norm", "modulation norm of a signal");
    CLI::App* gabor_cmd = app.add_subcommand("gabor", "Gabor frame tools");
    CLI::App* check_frame = gabor_cmd->add_subcommand("check-frame", "frame bounds and dual residual");
    check_frame->add_option("--alpha", flag_alpha, "time lattice step");
    check_frame->add_option("--beta", flag_beta, "frequency lattice step");
    check_frame->add_option("--window", flag_window, "window name (gaussian)");
    check_frame->add_option("--N", flag_N, "grid points");
    check_frame->add_option("--R", flag_R, "grid half width");
    CLI::App* fio_cmd = app.add_subcommand("fio", "oscillatory quadrature operators");
    CLI::App* fio_apply_cmd = fio_cmd->add_subcommand("apply", "apply the operator");
    CLI::App* fio_kernel_cmd = fio_cmd->add_subcommand("kernel", "materialize the kernel");
    CLI::App* fio_matrix_cmd = fio_cmd->add_subcommand("matrix", "Gabor matrix of the operator");
    CLI::App* torus_cmd = app.add_subcommand("torus", "periodic operators");
    CLI::App* torus_apply_cmd = torus_cmd->add_subcommand(
        "apply", "apply on trig polynomials; CSV columns: k, re, im");
    torus_apply_cmd->add_option("--cutoff", flag_cutoff, "frequency cutoff F");
    CLI::App* torus_kernel_cmd = torus_cmd->add_subcommand(
        "kernel", "periodic kernel; CSV columns: cutoff, l2_norm, max_abs, field_file");
    torus_kernel_cmd->add_option("--cutoff", flag_cutoff, "frequency cutoff F");
    CLI::App* verify_cmd = app.add_subcommand("verify", "numerical certification runs");
    CLI::App* v_stft = verify_cmd->add_subcommand(
        "stft-relation",
        "kernel vs symbol STFT identity; CSV columns: samples, max_deviation, max_snap, tol, pass");
    CLI::App* v_bound = verify_cmd->add_subcommand(
        "bound",
        "sampled operator-norm ratios; CSV columns: operator, p1, q1, p2, q2, s1, s2, weight, "
        "trials, max_ratio_small, max_ratio_large, stability, pass");
    CLI::App* v_dfio = verify_cmd->add_subcommand(
        "decay-fio",
        "phase-gradient decay constants; CSV columns: N1, N2, N3, C_small, C_large, stability, "
        "joint_C, consistency, slope_n, slope_m, slope_m0, pass");
    CLI::App* v_dpdo = verify_cmd->add_subcommand(
        "decay-pdo",
        "factored decay constants; CSV columns as decay-fio");
    for (CLI::App* sub : {stft_cmd, norm_cmd, gabor_cmd, check_frame, fio_cmd, fio_apply_cmd,
                          fio_kernel_cmd, fio_matrix_cmd, torus_cmd, torus_apply_cmd,
                          torus_kernel_cmd, verify_cmd, v_stft, v_bound, v_dfio, v_dpdo})
        sub->fallthrough();
    app.require_subcommand(1);

    CLI11_PARSE(app, argc, argv);

    const char* log_env = std::getenv("TFIO_LOG");
    RunContext ctx;
    ctx.log_info = log_env && std::string(log_env) == "info";

    try {
        if (!config_path.empty()) ctx.cfg = ExperimentConfig::parse_file(config_path);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    // flag overrides for check-frame
    auto set_num = [&](const std::string& key, double v) {
        Term t;
        t.kind = Term::Kind::Number;
        t.number = v;
        ctx.cfg.set(key, t);
    };
    if (flag_alpha > 0) set_num("alpha", flag_alpha);
    if (flag_beta > 0) set_num("beta", flag_beta);
    if (flag_N > 0) set_num("N", flag_N);
    if (flag_R > 0) set_num("R", flag_R);
    if (flag_cutoff > 0) set_num("cutoff", flag_cutoff);
    if (!flag_window.empty()) {
        Term t;
        t.kind = Term::Kind::Ident;
        t.text = flag_window;
        ctx.cfg.set("window", t);
    }

    ctx.seed = seed != 0 ? seed
                         : static_cast<std::uint64_t>(ctx.cfg.number("seed", 1.0));
    ctx.out_path = out_path != "out.csv" ? out_path : ctx.cfg.ident("out", out_path);
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif

    const auto t0 = std::chrono::steady_clock::now();
    int code = 2;
    try {
        if (stft_cmd->parsed()) code = run_stft(ctx);
        else if (norm_cmd->parsed()) code = run_norm(ctx);
        else if (gabor_cmd->parsed() && check_frame->parsed()) code = run_check_frame(ctx);
        else if (fio_cmd->parsed() && fio_apply_cmd->parsed()) code = run_fio_apply(ctx);
        else if (fio_cmd->parsed() && fio_kernel_cmd->parsed()) code = run_fio_kernel(ctx);
        else if (fio_cmd->parsed() && fio_matrix_cmd->parsed()) code = run_fio_matrix(ctx);
        else if (torus_cmd->parsed() && torus_apply_cmd->parsed()) code = run_torus_apply(ctx);
        else if (torus_cmd->parsed() && torus_kernel_cmd->parsed()) code = run_torus_kernel(ctx);
        else if (verify_cmd->parsed() && v_stft->parsed()) code = run_verify_stft_relation(ctx);
        else if (verify_cmd->parsed() && v_bound->parsed()) code = run_verify_bound(ctx);
        else if (verify_cmd->parsed() && v_dfio->parsed()) code = run_verify_decay(ctx, false);
        else if (verify_cmd->parsed() && v_dpdo->parsed()) code = run_verify_decay(ctx, true);
        else {
            std::cerr << "missing subcommand\n";
            return 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    if (ctx.log_info)
        std::cerr << "wall_time_ms=" << hms(t0) << " out=" << ctx.out_path << "\n";
    return code;
}
