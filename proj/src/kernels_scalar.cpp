#include "sidecat/kernels.hpp"

#include <cmath>

namespace sidecat::kernels::detail {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double sum_sq_scalar(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * a[i];
    return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void hermite_batch_scalar(const double* x, std::size_t m, int n_max, double* out) {
    const double norm0 = std::pow(M_PI, -0.25);
    for (std::size_t j = 0; j < m; ++j) {
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
