#include "tfio/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace tfio {
namespace detail {

namespace {

// Plans are reusable across arrays (FFTW_UNALIGNED) and expensive enough to
// cache; creation is serialized, execution is thread-safe.
fftw_plan cached_plan(int n, int sign) {
    static std::map<std::pair<int, int>, fftw_plan> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    const auto key = std::make_pair(n, sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<fftw_complex> scratch(static_cast<std::size_t>(n));
    fftw_plan p = fftw_plan_dft_1d(n, scratch.data(), scratch.data(),
                                   sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache.emplace(key, p);
    return p;
}

} // namespace

void fft_raw(cplx* data, int n, int sign) {
    fftw_plan p = cached_plan(n, sign);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data),
                     reinterpret_cast<fftw_complex*>(data));
}

} // namespace detail

namespace {

// Scalar phase e^{sign * i pi N / 2}, exact by N mod 4.
cplx corner_phase(int n, int sign) {
    switch (((n % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return sign < 0 ? cplx{0.0, -1.0} : cplx{0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return sign < 0 ? cplx{0.0, 1.0} : cplx{0.0, -1.0};
    }
}

// In-place transform of one axis of the tensor. With x_j = -R + j h and
// xi_k = -R' + k/(2R), the Riemann sum h * sum_j f_j e^{sign 2pi i x_j xi_k}
// factors as h * P0 * (-1)^k * FFT_sign[(-1)^j f_j](k).
void transform_axis(std::vector<cplx>& data, const std::vector<int>& shape, int axis,
                    double h, int sign) {
    const int n = shape[axis];
    const auto strides = strides_of(shape);
    const std::size_t stride = strides[axis];
    const std::size_t total = data.size();
    const std::size_t fibers = total / static_cast<std::size_t>(n);
    const cplx p0 = corner_phase(n, sign) * h;

    #pragma omp parallel
    {
        std::vector<cplx> buf(static_cast<std::size_t>(n));
        #pragma omp for schedule(static)
        for (long long fi = 0; fi < static_cast<long long>(fibers); ++fi) {
            const std::size_t f = static_cast<std::size_t>(fi);
            const std::size_t base = (f / stride) * (stride * n) + (f % stride);
            for (int j = 0; j < n; ++j) {
                const cplx v = data[base + static_cast<std::size_t>(j) * stride];
                buf[j] = (j & 1) ? -v : v;
            }
            detail::fft_raw(buf.data(), n, sign);
            for (int k = 0; k < n; ++k) {
                const cplx v = buf[k] * p0;
                data[base + static_cast<std::size_t>(k) * stride] = (k & 1) ? -v : v;
            }
        }
    }
}

} // namespace

SampledField dft(const SampledField& f, const std::set<int>& block_indices, int sign) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("dft: sign must be +1 or -1");
    SampledField out = f;
    const auto shape = f.shape();
    for (int b : block_indices) {
        if (b < 0 || b >= static_cast<int>(f.blocks.size()))
            throw std::out_of_range("dft: block index out of range");
        int axis0 = 0;
        for (int i = 0; i < b; ++i) axis0 += f.blocks[static_cast<std::size_t>(i)].dim;
        const double h = out.blocks[static_cast<std::size_t>(b)].spacing();
        for (int a = 0; a < out.blocks[static_cast<std::size_t>(b)].dim; ++a)
            transform_axis(out.data, shape, axis0 + a, h, sign);
        out.blocks[static_cast<std::size_t>(b)] = out.blocks[static_cast<std::size_t>(b)].dual();
    }
    return out;
}

SampledField dft(const SampledField& f, int sign) {
    std::set<int> all;
    for (int b = 0; b < static_cast<int>(f.blocks.size()); ++b) all.insert(b);
    return dft(f, all, sign);
}

} // namespace tfio
