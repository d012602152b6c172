// Timing comparison between the parallel kernels and the serial reference
// implementations, plus a thread-scaling column for the OpenMP paths.

#include "tfio/fft.hpp"
#include "tfio/fio.hpp"
#include "tfio/gabor.hpp"
#include "tfio/ref.hpp"
#include "tfio/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

using namespace tfio;

namespace {

double time_ms(const std::function<void()>& body, int reps) {
    // one warm-up, then the best of `reps`
    body();
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        body();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

SampledField gaussian_field(const UniformGrid& g) {
    SampledField f({g});
    for (int j = 0; j < g.points; ++j) {
        const double t = g.coord(j);
        f.data[static_cast<std::size_t>(j)] = std::pow(2.0, 0.25) * std::exp(-std::numbers::pi * t * t);
    }
    return f;
}

void report(const char* name, double parallel_ms, double serial_ms) {
    std::printf("%-28s %10.2f ms %12.2f ms %8.2fx\n", name, parallel_ms, serial_ms,
                serial_ms / parallel_ms);
}

} // namespace

int main(int argc, char** argv) {
    const bool quick = argc > 1 && std::string(argv[1]) == "--quick";
    const int reps = quick ? 1 : 3;

#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (no OpenMP)\n");
#endif
    std::printf("%-28s %13s %15s %9s\n", "kernel", "parallel", "serial ref", "speedup");

    Rng rng(2024);

    {
        const UniformGrid g(1, quick ? 64 : 128, 4.0);
        SampledField f({g});
        for (auto& z : f.data) z = rng.complex_gaussian();
        const double par = time_ms([&] { (void)dft(f, -1); }, reps);
        const double ser = time_ms([&] { (void)ref::dft_direct(f, {0}, -1); }, reps);
        report("dft (fft vs direct sum)", par, ser);
    }

    {
        const int n = quick ? 24 : 40;
        const UniformGrid g(1, n, 4.0);
        KernelField k{SampledField({g, g, g})};
        for (auto& z : k.data.data) z = rng.complex_gaussian();
        SampledField f1({g}), f2({g});
        for (auto& z : f1.data) z = rng.complex_gaussian();
        for (auto& z : f2.data) z = rng.complex_gaussian();
        const SampledField in[2] = {f1, f2};
        const double par = time_ms([&] { (void)bk_apply(k, in); }, reps);
        const double ser = time_ms([&] { (void)ref::bk_apply_loops(k, in); }, reps);
        report("bk_apply (r = 2)", par, ser);
    }

    {
        const int n = quick ? 32 : 64;
        const UniformGrid g(1, n, 4.0);
        const FioProblem p(symbol_random_trig(2, 1, 4, 1.0, 5),
                           {phase_perturbed(0.1, 1), phase_perturbed(0.1, 1)}, g);
        SampledField f1({g}), f2({g});
        for (auto& z : f1.data) z = rng.complex_gaussian();
        for (auto& z : f2.data) z = rng.complex_gaussian();
        const SampledField in[2] = {f1, f2};
        const FioOperator op(p);
        const double par = time_ms([&] { (void)op.apply(in); }, reps);
        const double ser = time_ms([&] { (void)ref::fio_apply_serial(p, in); }, reps);
        report("fio apply (r = 2)", par, ser);
    }

    {
        const int n = quick ? 48 : 64;
        const UniformGrid g(1, n, 4.0);
        GaborSystem sys(gaussian_field(g), 0.5, 0.5, quick ? 2 : 3, 2);
        const FioProblem p(symbol_one(2, 1), {phase_linear(1), phase_linear(1)}, g);
        const KernelField k = kernel_from_symbol(p);
        const double par = time_ms([&] { (void)gabor_matrix(k, sys); }, reps);
        // reference: one direct entry, scaled to the full tensor count
        const CoefficientTensor probe = gabor_matrix(k, sys);
        std::vector<int> entry(6, 0);
        const double one_entry = time_ms([&] { (void)ref::gabor_matrix_entry(k, sys, entry); }, reps);
        report("gabor_matrix vs per-entry", par, one_entry * static_cast<double>(probe.size()));
    }

    {
        const UniformGrid g(1, quick ? 64 : 128, 8.0);
        GaborSystem sys(gaussian_field(g), 0.5, 0.5, quick ? 8 : 16, quick ? 4 : 8);
        SampledField f({g});
        for (auto& z : f.data) z = rng.complex_gaussian();
        const double par = time_ms([&] { (void)frame_operator(sys, f); }, reps);
        const double ser = time_ms(
            [&] {
                // synthesis by explicit atom loops
                SampledField acc({g});
                std::vector<int> m(1), nn(1);
                for (m[0] = -sys.m_range; m[0] <= sys.m_range; ++m[0])
                    for (nn[0] = -sys.n_range; nn[0] <= sys.n_range; ++nn[0]) {
                        const SampledField atom = gabor_atom(sys, m, nn);
                        const cplx c = inner(f, atom);
                        for (std::size_t j = 0; j < acc.size(); ++j) acc.data[j] += c * atom.data[j];
                    }
                (void)acc;
            },
            reps);
        report("frame_operator vs atom loop", par, ser);
    }

    return 0;
}
