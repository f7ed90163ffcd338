#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "sidecat/errors.hpp"

// Finite-dimensional Fock-space numerics. Conventions: hbar = 1,
// x(phi) = (e^{-i phi} a + e^{i phi} a^dag)/sqrt(2), so the vacuum quadrature
// variance is 1/2 and the vacuum Wigner value at the origin is 1/pi.
namespace sidecat::fock {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

struct FockKet {
    Vec amps;    // indexed by photon number 0..cutoff
    int cutoff;  // >= 1

    double norm() const { return amps.norm(); }
    void normalize();
};

struct DensityMatrix {
    Mat mat;  // (cutoff+1)^2, Hermitian, trace 1, PSD
    int cutoff;

    static DensityMatrix from_ket(const FockKet& psi);
    double trace() const { return mat.trace().real(); }
    void hermitize() { mat = ((mat + mat.adjoint()) / 2.0).eval(); }
};

// Annihilation operator as a matrix on the truncated space.
Mat lowering_operator(int cutoff);

// a|psi>, unnormalized; the top Fock amplitude of the result is zero.
FockKet annihilate(const FockKet& psi);

// exp[(r/2)(a^dag^2 - a^2)] |psi> via truncated matrix exponential.
// Throws TruncationError if the norm loss exceeds tol.
FockKet squeeze(double r, const FockKet& psi, double tol = 1e-6);

FockKet vacuum(int cutoff);
FockKet number_state(int n, int cutoff);
FockKet squeezed_vacuum(double r, int cutoff, double tol = 1e-6);

// Pure-loss (beamsplitter to vacuum) channel of transmissivity eta.
DensityMatrix apply_loss(const DensityMatrix& rho, double eta);

// Truncated displacement operator exp(alpha a^dag - conj(alpha) a) with a
// norm-loss guard of 1e-6 on the displaced vacuum.
Mat displacement(Complex alpha, int cutoff);

// W(x,p) by the displaced-parity formula, alpha = (x + i p)/sqrt(2).
double wigner_at(const DensityMatrix& rho, double x, double p);

// <psi|rho|psi>.
double fidelity(const DensityMatrix& rho, const FockKet& psi);

// Uhlmann fidelity between two density matrices.
double fidelity_mixed(const DensityMatrix& a, const DensityMatrix& b);

// N[|alpha> - |-alpha>]: odd Fock amplitudes only.
FockKet odd_cat(Complex alpha, int cutoff);

struct CatFit {
    Complex alpha;
    double fidelity;
};

// Maximizes <cat(alpha)|rho|cat(alpha)> over complex alpha: grid search over
// |alpha| in [0, 2.5] step 0.05 and arg alpha in [0, pi) step pi/180, then
// Nelder-Mead refinement. Ties broken by smallest |alpha|.
CatFit best_fit_odd_cat(const DensityMatrix& rho);

std::vector<double> photon_distribution(const DensityMatrix& rho);

}  // namespace sidecat::fock
