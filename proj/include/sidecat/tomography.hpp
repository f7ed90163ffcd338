#pragma once

#include <cstdint>
#include <vector>

#include "sidecat/errors.hpp"
#include "sidecat/fock.hpp"
#include "sidecat/homodyne.hpp"
#include "sidecat/spectral.hpp"

// Analysis stack: ICA envelope estimation by kurtosis minimization,
// quadrature extraction with shot-noise normalization, recursive
// maximum-likelihood reconstruction, and bootstrap error bars.
namespace sidecat::tomography {

enum class Channel { I, Q };

struct IcaConfig {
    enum class Init { theory_envelope, random };
    Init init = Init::theory_envelope;
    std::uint64_t seed = 0;  // used by random init
    int max_iters = 500;
    double tol = 1e-8;  // stop when the projected step changes w by less
    bool whiten = true;
    int pca_rank = 200;  // whitening rank (clamped to the window length)
    double win_start_ns = -50.0;
    double win_end_ns = 250.0;
};

struct IcaResult {
    spectral::TemporalMode chi;  // extractor on the full trace grid, unit norm, positive peak
    double kurtosis;             // summed per-phase excess kurtosis at the solution
    int iters = 0;
    bool converged = false;  // false = NonConvergence; chi is the best iterate
};

// chi_theory with D^T chi = g, D the detector convolution matrix: the
// extractor whose measured envelope is exactly g.
spectral::TemporalMode deconvolve_detector(const spectral::TemporalMode& g, double f_c_ghz);

// q = D^T chi, normalized: the envelope the extractor actually weighs
// (compare against (f*h) for mode matching).
spectral::TemporalMode measured_envelope(const spectral::TemporalMode& chi, double f_c_ghz);

// Minimizes the sum over phase groups of the excess kurtosis of <chi, trace>
// by projected gradient descent after PCA whitening. The per-phase grouping
// matters: pooling phases makes Gaussian background directions leptokurtic
// through phase-to-phase variance mixing.
IcaResult estimate_envelope_ica(const homodyne::HomodyneTraceSet& traces, const IcaConfig& cfg,
                                Channel channel = Channel::I,
                                const spectral::TemporalMode* theory_chi = nullptr);

// x_i = sum_t chi(t) trace_i(t) dt, scaled so the pump-off calibration set has
// variance 1/2. Throws CalibrationMissing without calibration traces and
// GridMismatch if chi is not on the trace grid.
homodyne::QuadratureDataset extract_quadratures(const homodyne::HomodyneTraceSet& traces,
                                                const spectral::TemporalMode& chi, Channel channel,
                                                const homodyne::HomodyneTraceSet& calibration);

struct MleConfig {
    int cutoff = 13;
    int max_iters = 2000;
    double likelihood_tol = 1e-10;  // relative log-likelihood increase
    double bin_width = 0.0;         // 0 = no binning (pure sample-based R)
};

struct MleResult {
    fock::DensityMatrix rho;
    std::vector<double> log_likelihood;
    int iters = 0;
    bool converged = false;
};

// Recursive MLE: rho <- N[R rho R], R = sum_j w_j Pi_j / Tr[rho Pi_j], with
// Pi_j built from harmonic-oscillator eigenfunctions <n|x,phi> = e^{i n phi} psi_n(x).
// Throws PhaseCoverage unless the phases cover the half circle of quadrature
// directions (>= 2 distinct phases, max gap mod pi <= pi/2).
MleResult mle_reconstruct(const homodyne::QuadratureDataset& data, const MleConfig& cfg);

struct BootstrapResult {
    double mean = 0.0;
    double std = 0.0;
};

// Per-phase resampling with replacement, MLE re-run, W(x,p) evaluated per
// trial. Deterministic given seed; trials are parallelized over n_threads
// with per-trial seeding so the result is thread-count independent.
BootstrapResult bootstrap_wigner(const homodyne::QuadratureDataset& data, const MleConfig& cfg,
                                 int n_boot, double x, double p, std::uint64_t seed,
                                 int n_threads = 1);

struct GaussianFit {
    double r = 0.0;
    double eta = 1.0;
    double fidelity = 0.0;
};

// Best Uhlmann fidelity of rho to a lossy squeezed vacuum over a (r, eta)
// grid: r in [0.25, 0.55] step 0.025, eta in [0.45, 0.95) step 0.025.
GaussianFit best_fit_lossy_squeezed(const fock::DensityMatrix& rho);

}  // namespace sidecat::tomography
