#include "sidecat/kernels.hpp"

#include <cmath>
#include <immintrin.h>

namespace sidecat::kernels::detail {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

}  // namespace

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double sum_sq_avx2(const double* a, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(a + i);
        acc0 = _mm256_fmadd_pd(v, v, acc0);
    }
    double acc = hsum(acc0);
    for (; i < n; ++i) acc += a[i] * a[i];
    return acc;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void hermite_batch_avx2(const double* x, std::size_t m, int n_max, double* out) {
    const double norm0 = std::pow(M_PI, -0.25);
    std::size_t j = 0;
    for (; j + 4 <= m; j += 4) {
        const __m256d xj = _mm256_loadu_pd(x + j);
        // exp() has no AVX2 intrinsic; evaluate psi_0 element-wise, recur vectorized.
        alignas(32) double p0[4];
        for (int k = 0; k < 4; ++k) p0[k] = norm0 * std::exp(-0.5 * x[j + k] * x[j + k]);
        __m256d pm1 = _mm256_load_pd(p0);
        _mm256_storeu_pd(out + j, pm1);
        if (n_max < 1) continue;
        __m256d p = _mm256_mul_pd(_mm256_set1_pd(std::sqrt(2.0)), _mm256_mul_pd(xj, pm1));
        _mm256_storeu_pd(out + m + j, p);
        for (int n = 1; n < n_max; ++n) {
            const __m256d c1 = _mm256_set1_pd(std::sqrt(2.0 / (n + 1)));
            const __m256d c2 = _mm256_set1_pd(std::sqrt(double(n) / (n + 1)));
            __m256d next = _mm256_fmsub_pd(_mm256_mul_pd(c1, xj), p, _mm256_mul_pd(c2, pm1));
            pm1 = p;
            p = next;
            _mm256_storeu_pd(out + std::size_t(n + 1) * m + j, p);
        }
    }
    for (; j < m; ++j) {
        const double xj = x[j];
        double pm1 = norm0 * std::exp(-0.5 * xj * xj);
        out[j] = pm1;
        if (n_max < 1) continue;
        double p = std::sqrt(2.0) * xj * pm1;
        out[m + j] = p;
        for (int n = 1; n < n_max; ++n) {
            const double next =
                std::sqrt(2.0 / (n + 1)) * xj * p - std::sqrt(double(n) / (n + 1)) * pm1;
            pm1 = p;
            p = next;
            out[std::size_t(n + 1) * m + j] = p;
        }
    }
}

}  // namespace sidecat::kernels::detail
