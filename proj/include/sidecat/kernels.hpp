#pragma once

#include <cstddef>

// Data-parallel inner loops used by the extraction and tomography paths.
// Each kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant; the active one is picked at load time from cpuid. The equivalence
// tests flip the active ISA with force_isa and compare results.
namespace sidecat::kernels {

enum class Isa { scalar, avx2 };

Isa active_isa();

// Force a specific ISA (used by the equivalence tests). Returns the ISA
// actually in effect (requesting avx2 on a machine without it is a no-op).
Isa force_isa(Isa isa);

// sum_i a[i]*b[i]
double dot(const double* a, const double* b, std::size_t n);

// sum_i a[i]^2
double sum_sq(const double* a, std::size_t n);

// y[i] += alpha*x[i]
void axpy(double alpha, const double* x, double* y, std::size_t n);

// Harmonic-oscillator eigenfunctions psi_n(x) for n = 0..n_max over a batch
// of m points, vacuum-variance-1/2 convention:
//   psi_0(x) = pi^{-1/4} exp(-x^2/2),  upward recurrence in n.
// out is (n_max+1) x m row-major: out[n*m + j] = psi_n(x[j]).
void hermite_batch(const double* x, std::size_t m, int n_max, double* out);

}  // namespace sidecat::kernels
