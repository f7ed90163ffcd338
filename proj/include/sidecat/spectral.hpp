#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "sidecat/errors.hpp"

// Continuous-wave frequency/time model of the OPO and the trigger line.
// Internal unit discipline: time in ns, angular frequency in rad/ns,
// ordinary frequency in GHz. The pump parameter epsilon is stored as a
// dimensionless fraction of gamma; formulas restore units internally.
namespace sidecat::spectral {

enum class ResonanceParity {
    resonant_at_carrier,       // "-" branch of the comb formula
    anti_resonant_at_carrier,  // "+" branch (the experimental case)
};

struct OpoParams {
    double gamma_per_ns = 1.0 / 16.0;  // cavity decay constant
    double epsilon = 0.21;             // pump, fraction of gamma, < 1
    double fsr_ghz = 1.0012;           // free spectral range 2*Omega
    ResonanceParity parity = ResonanceParity::anti_resonant_at_carrier;

    double delta_ns() const { return 1.0 / fsr_ghz; }  // cavity round-trip time
    double omega_rad_per_ns() const { return M_PI * fsr_ghz; }  // first resonance
    double epsilon_rad_per_ns() const { return epsilon * gamma_per_ns; }
};

struct FilterChain {
    std::vector<double> decays_per_ns;  // one single-sided decay per cavity
};

struct TemporalMode {
    std::vector<double> samples;
    double t0_ns = 0.0;  // time of samples[0] relative to the trigger
    double dt_ns = 0.0;

    double norm_sq() const;
    void normalize();  // 2-norm (including dt weight) to 1
    double time_at(std::size_t i) const { return t0_ns + double(i) * dt_ns; }
};

struct GridSpec {
    double t_min_ns = -100.0;
    double t_max_ns = 400.0;
    double dt_ns = 0.1;
};

// Exact comb formula for the squeezing spectrum r(omega).
double r_exact(const OpoParams& p, double omega_rad_per_ns);

// Single-resonance form ln|(gamma + eps~ + i(w - Omega))/(gamma - eps~ - i(w - Omega))|.
double r_lorentzian(const OpoParams& p, double omega_rad_per_ns);

// Weak-pump Lorentzian 2 gamma eps~/(gamma^2 + (w - Omega)^2), peak 2*epsilon.
double r_lorentzian_weak(const OpoParams& p, double omega_rad_per_ns);

// 10*log10(1 + eta (e^{+-2r} - 1)); antisqueezed picks the + sign.
double measured_squeezing_db(const OpoParams& p, double eta, double omega_rad_per_ns,
                             bool antisqueezed);

// R(t) = sqrt(2 pi) eps~ exp(-gamma|t| - i Omega t).
std::complex<double> time_correlation(const OpoParams& p, double t_ns);

// f(t) = (T_1 * T_2 * ... )(t), T_i(t) = exp(-gamma_i t) Theta(t), on the
// grid [0, t_max - t_min). Throws GridError if dt is too coarse for the
// fastest filter.
TemporalMode trigger_response(const FilterChain& chain, const GridSpec& grid = {});

// Normalized heralded-mode envelope (f*h)(t), h(t) = exp(-gamma_opo |t|),
// time axis relative to the trigger at t = 0.
TemporalMode cat_envelope(const OpoParams& p, const FilterChain& chain, const GridSpec& grid = {});

// |<a,b>|^2 for unit-norm inputs; resamples b onto a's grid by linear
// interpolation when the grids differ. Throws GridMismatch when the supports
// do not overlap.
double mode_overlap(const TemporalMode& a, const TemporalMode& b);

// Linear-interpolation resampling onto an explicit grid (zero outside support).
TemporalMode resample(const TemporalMode& m, double t0_ns, double dt_ns, std::size_t n);

}  // namespace sidecat::spectral
