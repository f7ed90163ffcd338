#include "sidecat/fock.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <array>
#include <cmath>

namespace sidecat::fock {

void FockKet::normalize() {
    const double n = amps.norm();
    if (n > 0) amps /= n;
}

DensityMatrix DensityMatrix::from_ket(const FockKet& psi) {
    return DensityMatrix{psi.amps * psi.amps.adjoint(), psi.cutoff};
}

Mat lowering_operator(int cutoff) {
    Mat a = Mat::Zero(cutoff + 1, cutoff + 1);
    for (int n = 1; n <= cutoff; ++n) a(n - 1, n) = std::sqrt(double(n));
    return a;
}

FockKet annihilate(const FockKet& psi) {
    if (psi.cutoff < 1) throw CutoffMismatch("annihilate: cutoff must be >= 1");
    FockKet out{Vec::Zero(psi.cutoff + 1), psi.cutoff};
    for (int n = 0; n < psi.cutoff; ++n) out.amps[n] = std::sqrt(double(n + 1)) * psi.amps[n + 1];
    return out;
}

FockKet squeeze(double r, const FockKet& psi, double tol) {
    const Mat a = lowering_operator(psi.cutoff);
    const Mat ad = a.adjoint();
    Mat gen = 0.5 * r * (ad * ad - a * a);
    Mat u = gen.exp();
    FockKet out{u * psi.amps, psi.cutoff};
    // The truncated generator is still anti-Hermitian, so u is exactly unitary
    // and norm alone cannot detect truncation. Measure the probability the
    // operation pushes past the cutoff in a padded space instead.
    const int pad = psi.cutoff + 10;
    const Mat ap = lowering_operator(pad);
    Mat up = Mat((0.5 * r * (ap.adjoint() * ap.adjoint() - ap * ap)).eval()).exp();
    Vec big = Vec::Zero(pad + 1);
    big.head(psi.cutoff + 1) = psi.amps;
    const double leak = Vec(up * big).tail(pad - psi.cutoff).squaredNorm();
    if (leak > tol)
        throw TruncationError("squeeze: weight " + std::to_string(leak) +
                              " leaks past cutoff " + std::to_string(psi.cutoff));
    return out;
}

FockKet vacuum(int cutoff) {
    FockKet out{Vec::Zero(cutoff + 1), cutoff};
    out.amps[0] = 1.0;
    return out;
}

FockKet number_state(int n, int cutoff) {
    FockKet out{Vec::Zero(cutoff + 1), cutoff};
    out.amps[n] = 1.0;
    return out;
}

FockKet squeezed_vacuum(double r, int cutoff, double tol) {
    return squeeze(r, vacuum(cutoff), tol);
}

DensityMatrix apply_loss(const DensityMatrix& rho, double eta) {
    const int d = rho.cutoff + 1;
    if (eta >= 1.0) return rho;
    Mat out = Mat::Zero(d, d);
    // Kraus operators K_k: |n> -> sqrt(C(n,k) eta^{n-k} (1-eta)^k) |n-k>
    for (int k = 0; k <= rho.cutoff; ++k) {
        Mat kraus = Mat::Zero(d, d);
        for (int n = k; n <= rho.cutoff; ++n) {
            double logc = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
            double amp = std::exp(0.5 * logc) * std::pow(eta, 0.5 * (n - k)) *
                         std::pow(1.0 - eta, 0.5 * k);
            kraus(n - k, n) = amp;
        }
        out += kraus * rho.mat * kraus.adjoint();
    }
    DensityMatrix result{out, rho.cutoff};
    result.hermitize();
    return result;
}

Mat displacement(Complex alpha, int cutoff) {
    const Mat a = lowering_operator(cutoff);
    Mat gen = alpha * a.adjoint() - std::conj(alpha) * a;
    Mat d = gen.exp();
    // The truncated exponential is exactly unitary, so guard against
    // truncation with the analytic coherent-state tail instead.
    const double n2 = std::norm(alpha);
    double inside = 0.0, term = std::exp(-n2);
    for (int n = 0; n <= cutoff; ++n) {
        inside += term;
        term *= n2 / double(n + 1);
    }
    if (1.0 - inside > 1e-6)
        throw TruncationError("displacement: cutoff too small for |alpha| = " +
                              std::to_string(std::abs(alpha)));
    return d;
}

namespace {

// <n|D(beta)|m> for n >= m: sqrt(m!/n!) beta^{n-m} e^{-|beta|^2/2} L_m^{(n-m)}(|beta|^2).
Complex displaced_element(int n, int m, Complex beta) {
    if (n < m) return std::conj(displaced_element(m, n, -beta));
    const int k = n - m;
    const double b2 = std::norm(beta);
    const double logamp =
        0.5 * (std::lgamma(m + 1.0) - std::lgamma(n + 1.0)) + 0.5 * k * std::log(b2 > 0 ? b2 : 1.0) -
        0.5 * b2;
    Complex phase = b2 > 0 ? std::pow(beta / std::abs(beta), k) : Complex(k == 0 ? 1.0 : 0.0);
    return phase * std::exp(logamp) * std::assoc_laguerre(unsigned(m), unsigned(k), b2);
}

}  // namespace

double wigner_at(const DensityMatrix& rho, double x, double p) {
    double parity_sum = 0.0;
    if (x == 0.0 && p == 0.0) {
        for (int n = 0; n <= rho.cutoff; ++n)
            parity_sum += (n % 2 == 0 ? 1.0 : -1.0) * rho.mat(n, n).real();
    } else {
        // Pi D(alpha) Pi = D(-alpha) gives D(-alpha) Pi D(alpha) = Pi D(2 alpha),
        // so W = (1/pi) Tr[rho Pi D(2 alpha)] with exact Laguerre matrix
        // elements (a truncated expm is badly wrong at large |alpha|).
        const Complex beta(std::sqrt(2.0) * x, std::sqrt(2.0) * p);
        Complex acc = 0.0;
        for (int m = 0; m <= rho.cutoff; ++m)
            for (int n = 0; n <= rho.cutoff; ++n)
                acc += rho.mat(m, n) * (n % 2 ? -1.0 : 1.0) * displaced_element(n, m, beta);
        parity_sum = acc.real();
    }
    return parity_sum / M_PI;
}

double fidelity(const DensityMatrix& rho, const FockKet& psi) {
    if (rho.cutoff != psi.cutoff) throw CutoffMismatch("fidelity: cutoff mismatch");
    return std::max(0.0, (psi.amps.adjoint() * rho.mat * psi.amps)(0, 0).real());
}

double fidelity_mixed(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.cutoff != b.cutoff) throw CutoffMismatch("fidelity_mixed: cutoff mismatch");
    Eigen::SelfAdjointEigenSolver<Mat> es(a.mat);
    Vec evals = es.eigenvalues().cast<Complex>();
    Mat sqrt_a = Mat::Zero(a.mat.rows(), a.mat.cols());
    for (int i = 0; i < evals.size(); ++i) {
        const double ev = std::max(0.0, evals[i].real());
        sqrt_a += std::sqrt(ev) * es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    }
    Mat inner = sqrt_a * b.mat * sqrt_a;
    Eigen::SelfAdjointEigenSolver<Mat> es2(inner);
    double tr = 0.0;
    for (int i = 0; i < es2.eigenvalues().size(); ++i)
        tr += std::sqrt(std::max(0.0, es2.eigenvalues()[i]));
    return tr * tr;
}

FockKet odd_cat(Complex alpha, int cutoff) {
    if (std::norm(alpha) > 0.5 * cutoff)
        throw TruncationError("odd_cat: |alpha|^2 too large for cutoff");
    FockKet out{Vec::Zero(cutoff + 1), cutoff};
    if (std::abs(alpha) < 1e-12) {
        out.amps[1] = 1.0;  // alpha -> 0 limit is the single photon
        return out;
    }
    for (int n = 1; n <= cutoff; n += 2) {
        const double logfact = std::lgamma(n + 1.0);
        out.amps[n] = std::pow(alpha, n) * std::exp(-0.5 * logfact);
    }
    out.normalize();
    return out;
}

namespace {

double cat_objective(const DensityMatrix& rho, Complex alpha) {
    return fidelity(rho, odd_cat(alpha, rho.cutoff));
}

}  // namespace

CatFit best_fit_odd_cat(const DensityMatrix& rho) {
    Complex best_alpha = 0.0;
    double best_f = cat_objective(rho, 0.0);
    double best_mag = 0.0;
    for (double mag = 0.0; mag <= 2.5 + 1e-9; mag += 0.05) {
        for (double arg = 0.0; arg < M_PI - 1e-12; arg += M_PI / 180.0) {
            const Complex alpha = std::polar(mag, arg);
            const double f = cat_objective(rho, alpha);
            // ties broken by smallest |alpha|
            if (f > best_f + 1e-12 || (std::abs(f - best_f) <= 1e-12 && mag < best_mag)) {
                best_f = f;
                best_alpha = alpha;
                best_mag = mag;
            }
            if (mag == 0.0) break;  // arg is degenerate at the origin
        }
    }
    // Nelder-Mead refinement in the (Re, Im) plane.
    struct Pt {
        double re, im, f;
    };
    auto eval = [&](double re, double im) { return cat_objective(rho, Complex(re, im)); };
    std::array<Pt, 3> simplex;
    const double h = 0.03;
    simplex[0] = {best_alpha.real(), best_alpha.imag(), best_f};
    simplex[1] = {best_alpha.real() + h, best_alpha.imag(), eval(best_alpha.real() + h, best_alpha.imag())};
    simplex[2] = {best_alpha.real(), best_alpha.imag() + h, eval(best_alpha.real(), best_alpha.imag() + h)};
    for (int iter = 0; iter < 200; ++iter) {
        std::sort(simplex.begin(), simplex.end(), [](const Pt& a, const Pt& b) { return a.f > b.f; });
        if (std::abs(simplex[0].f - simplex[2].f) < 1e-12) break;
        const double cre = (simplex[0].re + simplex[1].re) / 2;
        const double cim = (simplex[0].im + simplex[1].im) / 2;
        double rre = cre + (cre - simplex[2].re), rim = cim + (cim - simplex[2].im);
        double rf = eval(rre, rim);
        if (rf > simplex[0].f) {
            const double ere = cre + 2 * (cre - simplex[2].re), eim = cim + 2 * (cim - simplex[2].im);
            const double ef = eval(ere, eim);
            simplex[2] = ef > rf ? Pt{ere, eim, ef} : Pt{rre, rim, rf};
        } else if (rf > simplex[1].f) {
            simplex[2] = {rre, rim, rf};
        } else {
            const double kre = cre + 0.5 * (simplex[2].re - cre), kim = cim + 0.5 * (simplex[2].im - cim);
            const double kf = eval(kre, kim);
            if (kf > simplex[2].f) {
                simplex[2] = {kre, kim, kf};
            } else {
                for (int i = 1; i < 3; ++i) {
                    simplex[i].re = (simplex[i].re + simplex[0].re) / 2;
                    simplex[i].im = (simplex[i].im + simplex[0].im) / 2;
                    simplex[i].f = eval(simplex[i].re, simplex[i].im);
                }
            }
        }
    }
    std::sort(simplex.begin(), simplex.end(), [](const Pt& a, const Pt& b) { return a.f > b.f; });
    return CatFit{Complex(simplex[0].re, simplex[0].im), simplex[0].f};
}

std::vector<double> photon_distribution(const DensityMatrix& rho) {
    std::vector<double> out(rho.cutoff + 1);
    for (int n = 0; n <= rho.cutoff; ++n) out[n] = rho.mat(n, n).real();
    return out;
}

}  // namespace sidecat::fock
