#include "sidecat/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "sidecat/fft.hpp"
#include "sidecat/kernels.hpp"

namespace sidecat::spectral {

using Complex = std::complex<double>;

double TemporalMode::norm_sq() const {
    return kernels::sum_sq(samples.data(), samples.size()) * dt_ns;
}

void TemporalMode::normalize() {
    const double n = std::sqrt(norm_sq());
    if (n > 0)
        for (double& s : samples) s /= n;
}

double r_exact(const OpoParams& p, double omega) {
    if (p.epsilon >= 1.0) throw ConfigError("r_exact: OPO above threshold");
    const double gamma = p.gamma_per_ns;
    const double eps = p.epsilon_rad_per_ns();
    const double delta = p.delta_ns();
    const double sign = p.parity == ResonanceParity::anti_resonant_at_carrier ? 1.0 : -1.0;
    const Complex comb = (1.0 + sign * std::exp(Complex(0.0, omega * delta))) / delta;
    const Complex num = (gamma + eps) * (gamma + eps) - comb * comb;
    const Complex den = (gamma - comb) * (gamma - comb) - eps * eps;
    if (std::abs(den) < 1e-300) throw PoleError("r_exact: denominator vanishes");
    return std::log(std::abs(num / den));
}

double r_lorentzian(const OpoParams& p, double omega) {
    const double gamma = p.gamma_per_ns;
    const double eps = p.epsilon_rad_per_ns();
    const double detune = omega - p.omega_rad_per_ns();
    return std::log(std::abs(Complex(gamma + eps, detune) / Complex(gamma - eps, -detune)));
}

double r_lorentzian_weak(const OpoParams& p, double omega) {
    const double gamma = p.gamma_per_ns;
    const double eps = p.epsilon_rad_per_ns();
    const double detune = omega - p.omega_rad_per_ns();
    return 2.0 * gamma * eps / (gamma * gamma + detune * detune);
}

double measured_squeezing_db(const OpoParams& p, double eta, double omega, bool antisqueezed) {
    const double r = r_lorentzian(p, omega);
    const double var_rel = 1.0 + eta * (std::exp(antisqueezed ? 2.0 * r : -2.0 * r) - 1.0);
    return 10.0 * std::log10(var_rel);
}

Complex time_correlation(const OpoParams& p, double t_ns) {
    const double mag = std::sqrt(2.0 * M_PI) * p.epsilon_rad_per_ns() *
                       std::exp(-p.gamma_per_ns * std::abs(t_ns));
    return mag * std::exp(Complex(0.0, -p.omega_rad_per_ns() * t_ns));
}

TemporalMode trigger_response(const FilterChain& chain, const GridSpec& grid) {
    if (chain.decays_per_ns.empty()) throw ConfigError("trigger_response: empty filter chain");
    const double gmax = *std::max_element(chain.decays_per_ns.begin(), chain.decays_per_ns.end());
    if (grid.dt_ns > 1.0 / gmax / 20.0)
        throw GridError("trigger_response: dt too coarse for fastest filter");
    const std::size_t n = std::size_t((grid.t_max_ns - grid.t_min_ns) / grid.dt_ns);
    // Convolve on a one-sided grid of the same length; causal by construction.
    std::vector<double> acc(n);
    for (std::size_t i = 0; i < n; ++i)
        acc[i] = std::exp(-chain.decays_per_ns[0] * double(i) * grid.dt_ns);
    for (std::size_t k = 1; k < chain.decays_per_ns.size(); ++k) {
        std::vector<double> next(n);
        for (std::size_t i = 0; i < n; ++i)
            next[i] = std::exp(-chain.decays_per_ns[k] * double(i) * grid.dt_ns);
        auto full = fft::convolve(acc, next);
        for (std::size_t i = 0; i < n; ++i) acc[i] = full[i] * grid.dt_ns;
    }
    TemporalMode mode{std::move(acc), 0.0, grid.dt_ns};
    mode.normalize();
    return mode;
}

TemporalMode cat_envelope(const OpoParams& p, const FilterChain& chain, const GridSpec& grid) {
    const TemporalMode f = trigger_response(chain, grid);
    const std::size_t nh = std::size_t((grid.t_max_ns - grid.t_min_ns) / grid.dt_ns);
    std::vector<double> h(nh);
    for (std::size_t i = 0; i < nh; ++i)
        h[i] = std::exp(-p.gamma_per_ns * std::abs(grid.t_min_ns + double(i) * grid.dt_ns));
    // f starts at 0 and h at t_min, so the convolution starts at t_min and the
    // first nh samples cover [t_min, t_max).
    auto full = fft::convolve(f.samples, h);
    std::vector<double> out(nh);
    for (std::size_t i = 0; i < nh; ++i) out[i] = full[i] * grid.dt_ns;
    TemporalMode mode{std::move(out), grid.t_min_ns, grid.dt_ns};
    mode.normalize();
    return mode;
}

double mode_overlap(const TemporalMode& a, const TemporalMode& b) {
    const TemporalMode* pa = &a;
    TemporalMode rb;
    const TemporalMode* pb = &b;
    if (std::abs(a.t0_ns - b.t0_ns) > 1e-12 || std::abs(a.dt_ns - b.dt_ns) > 1e-12 ||
        a.samples.size() != b.samples.size()) {
        const double a_end = a.time_at(a.samples.size() - 1);
        const double b_end = b.time_at(b.samples.size() - 1);
        if (b_end < a.t0_ns || a_end < b.t0_ns)
            throw GridMismatch("mode_overlap: grids do not overlap");
        rb = resample(b, a.t0_ns, a.dt_ns, a.samples.size());
        rb.normalize();
        pb = &rb;
    }
    const double ip =
        kernels::dot(pa->samples.data(), pb->samples.data(), pa->samples.size()) * pa->dt_ns;
    return ip * ip;
}

TemporalMode resample(const TemporalMode& m, double t0_ns, double dt_ns, std::size_t n) {
    TemporalMode out{std::vector<double>(n, 0.0), t0_ns, dt_ns};
    const double t_last = m.time_at(m.samples.size() - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = t0_ns + double(i) * dt_ns;
        if (t < m.t0_ns || t > t_last) continue;
        const double u = (t - m.t0_ns) / m.dt_ns;
        const std::size_t k = std::min(std::size_t(u), m.samples.size() - 2);
        const double frac = u - double(k);
        out.samples[i] = (1.0 - frac) * m.samples[k] + frac * m.samples[k + 1];
    }
    return out;
}

}  // namespace sidecat::spectral
