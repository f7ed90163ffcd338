#include "sidecat/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>

namespace sidecat::fft {

namespace {

std::mutex g_plan_mutex;

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;
    double* real_buf = nullptr;
    fftw_complex* cplx_buf = nullptr;
};

std::map<std::size_t, PlanPair>& plan_cache() {
    static std::map<std::size_t, PlanPair> cache;
    return cache;
}

PlanPair& plans_for(std::size_t nfft) {
    auto& cache = plan_cache();
    auto it = cache.find(nfft);
    if (it != cache.end()) return it->second;
    PlanPair p;
    p.real_buf = fftw_alloc_real(nfft);
    p.cplx_buf = fftw_alloc_complex(nfft / 2 + 1);
    p.fwd = fftw_plan_dft_r2c_1d(int(nfft), p.real_buf, p.cplx_buf, FFTW_ESTIMATE);
    p.inv = fftw_plan_dft_c2r_1d(int(nfft), p.cplx_buf, p.real_buf, FFTW_ESTIMATE);
    return cache.emplace(nfft, p).first->second;
}

}  // namespace

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

std::vector<std::complex<double>> rfft(const std::vector<double>& in, std::size_t nfft) {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    PlanPair& p = plans_for(nfft);
    const std::size_t ncopy = std::min(in.size(), nfft);
    std::memcpy(p.real_buf, in.data(), ncopy * sizeof(double));
    std::memset(p.real_buf + ncopy, 0, (nfft - ncopy) * sizeof(double));
    fftw_execute(p.fwd);
    std::vector<std::complex<double>> out(nfft / 2 + 1);
    std::memcpy(out.data(), p.cplx_buf, out.size() * sizeof(fftw_complex));
    return out;
}

std::vector<double> irfft(const std::vector<std::complex<double>>& in, std::size_t nfft) {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    PlanPair& p = plans_for(nfft);
    const std::size_t nbins = nfft / 2 + 1;
    std::memset(p.cplx_buf, 0, nbins * sizeof(fftw_complex));
    std::memcpy(p.cplx_buf, in.data(), std::min(in.size(), nbins) * sizeof(fftw_complex));
    fftw_execute(p.inv);
    std::vector<double> out(nfft);
    const double scale = 1.0 / double(nfft);
    for (std::size_t i = 0; i < nfft; ++i) out[i] = p.real_buf[i] * scale;
    return out;
}

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t nout = a.size() + b.size() - 1;
    const std::size_t nfft = next_pow2(nout);
    auto fa = rfft(a, nfft);
    auto fb = rfft(b, nfft);
    for (std::size_t i = 0; i < fa.size(); ++i) fa[i] *= fb[i];
    auto full = irfft(fa, nfft);
    full.resize(nout);
    return full;
}

}  // namespace sidecat::fft
