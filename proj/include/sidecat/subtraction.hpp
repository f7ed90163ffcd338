#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sidecat/errors.hpp"
#include "sidecat/fock.hpp"
#include "sidecat/spectral.hpp"

// Phase modulation as a sideband beamsplitter, herald conditioning, the
// single-mode heralded-state model with loss and background mixture, and the
// efficiency budget arithmetic.
namespace sidecat::subtraction {

struct ModulationParams {
    double beta = 0.2;   // modulation depth; small-beta path valid for beta^2 <= 0.1
    double theta = 0.0;  // modulation phase, rad
};

// J_n(beta) for n in [-n_max, n_max], J_{-n} = (-1)^n J_n. Index i holds
// n = i - n_max.
std::vector<double> bessel_expansion(const ModulationParams& p, int n_max);

// Linear transform on (carrier, cos-sideband, sin-sideband) to first order in
// beta; sub-unitary, with the 2*Omega leakage beta^2/4 accounted as loss.
struct SidebandTransform {
    Eigen::Matrix3d mat;      // mode_out = mat * mode_in, amplitude basis
    double leakage_2omega;    // power fraction lost to the 2*Omega modes
};

// Throws ApproximationDomain when beta^2 > 0.1.
SidebandTransform sideband_beamsplitter(const ModulationParams& p);

// Normalized a S_{r_eff}|0>: the heralded odd-parity state before loss.
fock::FockKet herald_condition(double r_eff, int cutoff);

// Mode-weighted average of r(omega) over the envelope's power spectrum around
// the sideband resonance.
double effective_squeezing(const spectral::OpoParams& p, const spectral::TemporalMode& mode);

struct HeraldedStateModel {
    double r_eff = 0.374;
    double eta_cos = 0.68;
    double p_background = 0.04;
    int cutoff = 13;
};

// rho = (1-p_bg) L_eta[|cat><cat|] + p_bg L_eta[S|0><0|S^dag].
fock::DensityMatrix build_model_state(const HeraldedStateModel& m);

struct EfficiencyBudget {
    double escape = 0.982;
    double propagation_loss = 0.035;
    double interference = 0.935;
    double homodyne_det = 0.91;
    double beta = 0.2;                    // modulation tap depths derive from this
    double eta_sin_measured = 0.70;       // measured sin-sideband efficiency
    double fake_click_fraction = 0.008;
    double mode_mismatch_fraction = 0.030;
};

struct BudgetResult {
    double eta_est;       // escape*(1-prop)*interference*homodyne
    double eta_tot;       // eta_sin_measured/(1 - beta^2/4)
    double eta_cos;       // eta_tot*(1 - 3 beta^2/4)
    double eta_sin;       // eta_tot*(1 - beta^2/4)
    double mod_tap_cos;   // 3 beta^2/4
    double mod_tap_sin;   // beta^2/4
    double p_background;  // fake clicks + mode mismatch
};

BudgetResult efficiency_budget(const EfficiencyBudget& b);

}  // namespace sidecat::subtraction
