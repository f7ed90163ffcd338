#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sidecat/fock.hpp"
#include "sidecat/rng.hpp"

using namespace sidecat;
using fock::Complex;

namespace {

fock::DensityMatrix random_density(int cutoff, std::uint64_t seed) {
    rng::Stream rg(seed);
    const int d = cutoff + 1;
    fock::Mat g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = Complex(rg.normal(), rg.normal());
    fock::Mat rho = g * g.adjoint();
    rho /= rho.trace().real();
    return fock::DensityMatrix{rho, cutoff};
}

}  // namespace

TEST_CASE("annihilate ladder identities") {
    auto one = fock::number_state(1, 10);
    auto res = fock::annihilate(one);
    CHECK(std::abs(res.amps[0]) == doctest::Approx(1.0));
    auto vac = fock::vacuum(10);
    CHECK(fock::annihilate(vac).norm() == doctest::Approx(0.0));
    // a S|0> has odd-only support
    auto asv = fock::annihilate(fock::squeezed_vacuum(0.426, 20));
    for (int n = 0; n <= 20; n += 2) CHECK(std::abs(asv.amps[n]) < 1e-12);
}

TEST_CASE("squeeze: identity at r=0, mean photon number, unitarity") {
    auto vac = fock::vacuum(15);
    auto same = fock::squeeze(0.0, vac);
    CHECK((same.amps - vac.amps).norm() == doctest::Approx(0.0));

    auto sv = fock::squeezed_vacuum(0.2, 15);
    double nbar = 0.0;
    for (int n = 0; n <= 15; ++n) nbar += n * std::norm(sv.amps[n]);
    CHECK(nbar == doctest::Approx(std::sinh(0.2) * std::sinh(0.2)).epsilon(1e-6));

    // Quadrature variances (1/2)e^{+-2r} from the Fock representation.
    const double r = 0.426;
    auto s = fock::squeezed_vacuum(r, 25);
    const auto a = fock::lowering_operator(25);
    const fock::Mat x = (a + a.adjoint()) / std::sqrt(2.0);
    const fock::Mat p = (a - a.adjoint()) / Complex(0, std::sqrt(2.0));
    const double vx = (s.amps.adjoint() * x * x * s.amps)(0, 0).real();
    const double vp = (s.amps.adjoint() * p * p * s.amps)(0, 0).real();
    CHECK(vx == doctest::Approx(0.5 * std::exp(2 * r)).epsilon(1e-4));
    CHECK(vp == doctest::Approx(0.5 * std::exp(-2 * r)).epsilon(1e-4));

    // Unitarity on random kets.
    rng::Stream rg(3);
    for (int trial = 0; trial < 5; ++trial) {
        fock::FockKet psi{fock::Vec(26), 25};
        for (int n = 0; n <= 25; ++n)
            psi.amps[n] = Complex(rg.normal(), rg.normal()) * std::exp(-0.5 * n);
        psi.normalize();
        auto out = fock::squeeze(0.3, psi, 1e-5);
        CHECK(out.norm() == doctest::Approx(1.0).epsilon(1e-5));
    }
    CHECK_THROWS_AS(fock::squeezed_vacuum(1.5, 4), TruncationError);
}

TEST_CASE("apply_loss: identity, binomial, composition, trace, positivity") {
    auto one = fock::DensityMatrix::from_ket(fock::number_state(1, 8));
    auto same = fock::apply_loss(one, 1.0);
    CHECK((same.mat - one.mat).norm() == doctest::Approx(0.0));

    auto lossy = fock::apply_loss(one, 0.68);
    CHECK(lossy.mat(0, 0).real() == doctest::Approx(0.32).epsilon(1e-12));
    CHECK(lossy.mat(1, 1).real() == doctest::Approx(0.68).epsilon(1e-12));

    for (std::uint64_t s = 0; s < 100; ++s) {
        auto rho = random_density(12, 100 + s);
        auto out = fock::apply_loss(rho, 0.3 + 0.007 * double(s));
        CHECK(out.trace() == doctest::Approx(1.0).epsilon(1e-10));
        Eigen::SelfAdjointEigenSolver<fock::Mat> es(out.mat);
        CHECK(es.eigenvalues().minCoeff() >= -1e-10);
    }

    auto rho = random_density(10, 42);
    auto c1 = fock::apply_loss(fock::apply_loss(rho, 0.9), 0.8);
    auto c2 = fock::apply_loss(rho, 0.72);
    CHECK((c1.mat - c2.mat).norm() < 1e-9);
}

TEST_CASE("wigner_at: vacuum, cat parity, lossy photon, grid normalization") {
    auto vac = fock::DensityMatrix::from_ket(fock::vacuum(13));
    CHECK(fock::wigner_at(vac, 0, 0) == doctest::Approx(1.0 / M_PI).epsilon(1e-10));

    auto cat = fock::DensityMatrix::from_ket(fock::odd_cat(0.9, 13));
    CHECK(fock::wigner_at(cat, 0, 0) == doctest::Approx(-1.0 / M_PI).epsilon(1e-10));

    auto lossy = fock::apply_loss(fock::DensityMatrix::from_ket(fock::number_state(1, 13)), 0.68);
    CHECK(fock::wigner_at(lossy, 0, 0) == doctest::Approx((1 - 2 * 0.68) / M_PI).epsilon(1e-10));

    // Parity identity for a random state.
    auto rho = random_density(13, 5);
    double parity = 0.0;
    for (int n = 0; n <= 13; ++n) parity += (n % 2 ? -1.0 : 1.0) * rho.mat(n, n).real();
    CHECK(M_PI * fock::wigner_at(rho, 0, 0) == doctest::Approx(parity).epsilon(1e-9));

    // Normalization over a +-6 grid.
    const double h = 0.1;
    double integral = 0.0;
    for (double x = -6; x <= 6; x += h)
        for (double p = -6; p <= 6; p += h) integral += fock::wigner_at(cat, x, p) * h * h;
    CHECK(integral == doctest::Approx(1.0).epsilon(2e-3));
}

TEST_CASE("fidelity basics and mismatch error") {
    auto vac = fock::vacuum(8);
    auto rho = fock::DensityMatrix::from_ket(vac);
    CHECK(fock::fidelity(rho, vac) == doctest::Approx(1.0));
    CHECK(fock::fidelity(rho, fock::number_state(1, 8)) == doctest::Approx(0.0));
    CHECK_THROWS_AS(fock::fidelity(rho, fock::vacuum(9)), CutoffMismatch);

    // Uhlmann fidelity against pure-state formula.
    auto sv = fock::squeezed_vacuum(0.3, 12);
    auto mixed = fock::apply_loss(fock::DensityMatrix::from_ket(sv), 0.8);
    const double f1 = fock::fidelity(mixed, sv);
    const double f2 = fock::fidelity_mixed(mixed, fock::DensityMatrix::from_ket(sv));
    CHECK(f1 == doctest::Approx(f2).epsilon(1e-8));
    CHECK(fock::fidelity_mixed(mixed, mixed) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("odd_cat limits and parity") {
    auto small = fock::odd_cat(Complex(0, 0), 9);
    CHECK(std::abs(small.amps[1]) == doctest::Approx(1.0));
    auto cat = fock::odd_cat(Complex(0.88, -0.19), 13);
    CHECK(cat.norm() == doctest::Approx(1.0).epsilon(1e-10));
    for (int n = 0; n <= 13; n += 2) CHECK(std::abs(cat.amps[n]) == doctest::Approx(0.0));
    CHECK_THROWS_AS(fock::odd_cat(Complex(4.0, 0.0), 9), TruncationError);
}

TEST_CASE("best_fit_odd_cat recovers a known cat and ties break to smallest alpha") {
    auto target = fock::DensityMatrix::from_ket(fock::odd_cat(0.9, 13));
    auto fit = fock::best_fit_odd_cat(target);
    CHECK(fit.fidelity == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(fit.alpha) == doctest::Approx(0.9).epsilon(0.02));

    auto vac = fock::DensityMatrix::from_ket(fock::vacuum(13));
    auto vfit = fock::best_fit_odd_cat(vac);
    CHECK(vfit.fidelity == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(std::abs(vfit.alpha) == doctest::Approx(0.0).epsilon(1e-6));
}
