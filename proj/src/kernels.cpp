#include "sidecat/kernels.hpp"

namespace sidecat::kernels {

namespace detail {
double dot_scalar(const double*, const double*, std::size_t);
double sum_sq_scalar(const double*, std::size_t);
void axpy_scalar(double, const double*, double*, std::size_t);
void hermite_batch_scalar(const double*, std::size_t, int, double*);
#if defined(SIDECAT_HAVE_AVX2)
double dot_avx2(const double*, const double*, std::size_t);
double sum_sq_avx2(const double*, std::size_t);
void axpy_avx2(double, const double*, double*, std::size_t);
void hermite_batch_avx2(const double*, std::size_t, int, double*);
#endif
}  // namespace detail

namespace {

struct Dispatch {
    Isa isa;
    double (*dot)(const double*, const double*, std::size_t);
    double (*sum_sq)(const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*hermite_batch)(const double*, std::size_t, int, double*);
};

constexpr Dispatch kScalar{Isa::scalar, detail::dot_scalar, detail::sum_sq_scalar,
                           detail::axpy_scalar, detail::hermite_batch_scalar};

#if defined(SIDECAT_HAVE_AVX2)
constexpr Dispatch kAvx2{Isa::avx2, detail::dot_avx2, detail::sum_sq_avx2, detail::axpy_avx2,
                         detail::hermite_batch_avx2};

bool cpu_has_avx2() { return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"); }
#endif

Dispatch pick_default() {
#if defined(SIDECAT_HAVE_AVX2)
    if (cpu_has_avx2()) return kAvx2;
#endif
    return kScalar;
}

Dispatch g_active = pick_default();

}  // namespace

Isa active_isa() { return g_active.isa; }

Isa force_isa(Isa isa) {
    if (isa == Isa::scalar) {
        g_active = kScalar;
    } else {
#if defined(SIDECAT_HAVE_AVX2)
        if (cpu_has_avx2()) g_active = kAvx2;
#endif
    }
    return g_active.isa;
}

double dot(const double* a, const double* b, std::size_t n) { return g_active.dot(a, b, n); }
double sum_sq(const double* a, std::size_t n) { return g_active.sum_sq(a, n); }
void axpy(double alpha, const double* x, double* y, std::size_t n) { g_active.axpy(alpha, x, y, n); }
void hermite_batch(const double* x, std::size_t m, int n_max, double* out) {
    g_active.hermite_batch(x, m, n_max, out);
}

}  // namespace sidecat::kernels
