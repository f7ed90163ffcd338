#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "sidecat/errors.hpp"
#include "sidecat/fock.hpp"
#include "sidecat/spectral.hpp"
#include "sidecat/subtraction.hpp"

// Synthetic homodyne data: wavepacket-level quadrature sampling and
// trace-level demodulated I/Q records for exercising the estimation pipeline.
// The background is exactly Gaussian-stationary; all non-Gaussian content
// lives in the injected cat mode (an approximation to the true conditional
// field, exact at the wavepacket level).
namespace sidecat::homodyne {

struct HomodyneConfig {
    double sample_rate_gsps = 0.5;
    double t_start_ns = -100.0;
    double t_end_ns = 300.0;
    double f_c_mhz = 14.0;  // detector single-pole cutoff
    std::vector<double> lo_phases;
    int n_traces_per_phase = 2000;
    int n_calibration_traces = 4000;
    int nfft_color = 512;  // FFT size for spectral coloring
    std::uint64_t seed = 7;
    double eta_q = 0.70;  // sin-sideband (Q channel) efficiency

    double dt_ns() const { return 1.0 / sample_rate_gsps; }
    std::size_t n_samples() const { return std::size_t((t_end_ns - t_start_ns) / dt_ns()); }
    double f_c_ghz() const { return f_c_mhz * 1e-3; }
};

struct HomodyneTraceSet {
    Eigen::MatrixXd i_traces;  // trace x time, detector-filtered
    Eigen::MatrixXd q_traces;
    std::vector<double> phase_per_trace;
    double t0_ns = 0.0;
    double dt_ns = 0.0;
};

struct QuadratureDataset {
    std::vector<double> phase;
    std::vector<double> value;
};

// p(x|phi) = <x,phi|rho|x,phi> evaluated on a grid.
std::vector<double> marginal_pdf(const fock::DensityMatrix& rho, double phi,
                                 const std::vector<double>& x);

// Draws x ~ p(x|phi) by CDF inversion on x in [-8, 8]; deterministic given seed.
QuadratureDataset sample_wavepacket_quadratures(const fock::DensityMatrix& rho,
                                                const std::vector<double>& phases,
                                                int n_per_phase, std::uint64_t seed);

// Causal single-pole kernel d[i] = 2 pi f_c exp(-2 pi f_c i dt) dt (unit DC
// gain up to grid resolution).
spectral::TemporalMode detector_response(double f_c_ghz, double dt_ns, std::size_t n);

// Lower-triangular Toeplitz convolution matrix of the detector kernel.
Eigen::MatrixXd detector_matrix(double f_c_ghz, double dt_ns, std::size_t n);

// Full trace synthesis: colored Gaussian background per phase, cat-mode
// injection in the I channel, lossy squeezed vacuum in the Q channel, detector
// filtering on both.
HomodyneTraceSet synthesize_traces(const subtraction::HeraldedStateModel& m,
                                   const spectral::OpoParams& opo,
                                   const spectral::TemporalMode& envelope,
                                   const HomodyneConfig& cfg);

// Pump-off (vacuum) traces for shot-noise calibration.
HomodyneTraceSet synthesize_calibration(const HomodyneConfig& cfg);

}  // namespace sidecat::homodyne
