#include "sidecat/subtraction.hpp"

#include <cmath>

#include "sidecat/fft.hpp"

namespace sidecat::subtraction {

std::vector<double> bessel_expansion(const ModulationParams& p, int n_max) {
    if (n_max < 2) throw ConfigError("bessel_expansion: n_max must be >= 2");
    std::vector<double> out(2 * n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        const double j = std::cyl_bessel_j(n, p.beta);
        out[n_max + n] = j;
        out[n_max - n] = (n % 2 == 0 ? j : -j);
    }
    return out;
}

SidebandTransform sideband_beamsplitter(const ModulationParams& p) {
    const double b2 = p.beta * p.beta;
    if (b2 > 0.1) throw ApproximationDomain("sideband_beamsplitter: beta^2 > 0.1");
    const double c = p.beta / std::sqrt(2.0);
    const double ct = std::cos(p.theta), st = std::sin(p.theta);
    SidebandTransform t;
    t.mat << std::sqrt(1.0 - b2 / 2.0), c * ct, c * st,
        -c * ct, std::sqrt(1.0 - 3.0 * b2 / 4.0), 0.0,
        -c * st, 0.0, std::sqrt(1.0 - b2 / 4.0);
    t.leakage_2omega = b2 / 4.0;
    return t;
}

fock::FockKet herald_condition(double r_eff, int cutoff) {
    if (r_eff <= 0) throw ConfigError("herald_condition: r_eff must be positive");
    fock::FockKet cat = fock::annihilate(fock::squeezed_vacuum(r_eff, cutoff));
    cat.normalize();
    return cat;
}

double effective_squeezing(const spectral::OpoParams& p, const spectral::TemporalMode& mode) {
    const std::size_t nfft = std::max<std::size_t>(1u << 18, fft::next_pow2(4 * mode.samples.size()));
    const auto spec = fft::rfft(mode.samples, nfft);
    const double omega0 = p.omega_rad_per_ns();
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < spec.size(); ++k) {
        const double nu = 2.0 * M_PI * double(k) / (double(nfft) * mode.dt_ns);
        const double w = std::norm(spec[k]);
        num += w * spectral::r_lorentzian(p, omega0 + nu);
        den += w;
    }
    return num / den;
}

fock::DensityMatrix build_model_state(const HeraldedStateModel& m) {
    const fock::FockKet cat = herald_condition(m.r_eff, m.cutoff);
    const fock::FockKet sv = fock::squeezed_vacuum(m.r_eff, m.cutoff);
    fock::DensityMatrix rho{
        (1.0 - m.p_background) * (cat.amps * cat.amps.adjoint()) +
            m.p_background * (sv.amps * sv.amps.adjoint()),
        m.cutoff};
    return fock::apply_loss(rho, m.eta_cos);
}

BudgetResult efficiency_budget(const EfficiencyBudget& b) {
    const double b2 = b.beta * b.beta;
    BudgetResult r;
    r.mod_tap_cos = 3.0 * b2 / 4.0;
    r.mod_tap_sin = b2 / 4.0;
    r.eta_est = b.escape * (1.0 - b.propagation_loss) * b.interference * b.homodyne_det;
    r.eta_tot = b.eta_sin_measured / (1.0 - r.mod_tap_sin);
    r.eta_cos = r.eta_tot * (1.0 - r.mod_tap_cos);
    r.eta_sin = r.eta_tot * (1.0 - r.mod_tap_sin);
    r.p_background = b.fake_click_fraction + b.mode_mismatch_fraction;
    return r;
}

}  // namespace sidecat::subtraction
