#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sidecat/subtraction.hpp"

using namespace sidecat;
using subtraction::EfficiencyBudget;
using subtraction::ModulationParams;

TEST_CASE("bessel expansion: limits, unitarity, second-order leakage") {
    auto zero = subtraction::bessel_expansion(ModulationParams{0.0, 0.0}, 5);
    CHECK(zero[5] == doctest::Approx(1.0));
    for (int i = 0; i < 11; ++i)
        if (i != 5) CHECK(zero[i] == doctest::Approx(0.0));

    auto j = subtraction::bessel_expansion(ModulationParams{0.2, 0.0}, 20);
    double sum = 0.0;
    for (double v : j) sum += v * v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
    // J_{-n} = (-1)^n J_n
    CHECK(j[20 - 1] == doctest::Approx(-j[20 + 1]));
    CHECK(j[20 - 2] == doctest::Approx(j[20 + 2]));
    // Second-order power transfer below 0.1%.
    CHECK(j[20 + 2] * j[20 + 2] < 0.001);
}

TEST_CASE("sideband beamsplitter: taps, power conservation, theta rotation, domain") {
    const ModulationParams p{0.2, 0.0};  // beta^2 = 0.040
    auto t = subtraction::sideband_beamsplitter(p);
    // Carrier picks up 2.0% of cos-sideband power.
    CHECK(t.mat(0, 1) * t.mat(0, 1) == doctest::Approx(0.020).epsilon(1e-10));
    // cos tap 3.0%, sin tap 1.0%.
    CHECK(1.0 - t.mat(1, 1) * t.mat(1, 1) == doctest::Approx(0.030).epsilon(1e-10));
    CHECK(1.0 - t.mat(2, 2) * t.mat(2, 2) == doctest::Approx(0.010).epsilon(1e-10));
    // Power conservation of the cos-sideband input.
    const double total = t.mat(0, 1) * t.mat(0, 1) + t.mat(1, 1) * t.mat(1, 1) + t.leakage_2omega;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-4));

    // theta = pi/2: roles swap to the sin-sideband.
    auto t2 = subtraction::sideband_beamsplitter(ModulationParams{0.2, M_PI / 2});
    CHECK(std::abs(t2.mat(0, 1)) < 1e-12);
    CHECK(t2.mat(0, 2) * t2.mat(0, 2) == doctest::Approx(0.020).epsilon(1e-10));

    CHECK_THROWS_AS(subtraction::sideband_beamsplitter(ModulationParams{0.4, 0.0}),
                    ApproximationDomain);
}

TEST_CASE("herald_condition: parity and small-r limit") {
    auto cat = subtraction::herald_condition(0.426, 15);
    CHECK(cat.norm() == doctest::Approx(1.0).epsilon(1e-10));
    for (int n = 0; n <= 15; n += 2) CHECK(std::abs(cat.amps[n]) == doctest::Approx(0.0));

    auto tiny = subtraction::herald_condition(0.01, 15);
    CHECK(std::abs(tiny.amps[1]) == doctest::Approx(1.0).epsilon(1e-3));

    // Fidelity to the best-fit odd cat stays high for the paper's r.
    auto fit = fock::best_fit_odd_cat(fock::DensityMatrix::from_ket(cat));
    CHECK(fit.fidelity > 0.95);
}

TEST_CASE("effective_squeezing: flat and narrow-mode limits, paper value") {
    spectral::OpoParams opo;  // paper params
    // Delta-narrow mode at the resonance -> r(Omega). A very long flat-ish
    // envelope concentrates the spectrum at nu = 0.
    spectral::TemporalMode narrow{std::vector<double>(60000), 0.0, 0.1};
    for (std::size_t i = 0; i < narrow.samples.size(); ++i)
        narrow.samples[i] = std::exp(-1e-4 * double(i) * 0.1);
    narrow.normalize();
    const double r_res = spectral::r_lorentzian(opo, opo.omega_rad_per_ns());
    CHECK(subtraction::effective_squeezing(opo, narrow) == doctest::Approx(r_res).epsilon(0.01));

    // Paper envelope: averaged inward, below r(Omega).
    const auto env = spectral::cat_envelope(opo, spectral::FilterChain{{1 / 30.0, 1 / 2.2, 1 / 3.2}},
                                            spectral::GridSpec{});
    const double r_eff = subtraction::effective_squeezing(opo, env);
    CHECK(r_eff < r_res);
    CHECK(r_eff == doctest::Approx(0.374).epsilon(0.01));
}

TEST_CASE("build_model_state: pure limit, lossy photon limit, monotonicity") {
    auto pure = subtraction::build_model_state({0.374, 1.0, 0.0, 13});
    CHECK(fock::wigner_at(pure, 0, 0) == doctest::Approx(-1.0 / M_PI).epsilon(1e-9));

    auto small_r = subtraction::build_model_state({0.01, 0.68, 0.0, 13});
    CHECK(fock::wigner_at(small_r, 0, 0) == doctest::Approx((1 - 2 * 0.68) / M_PI).epsilon(1e-3));

    // W(0,0) non-decreasing in p_bg and in loss.
    double prev = -1.0;
    for (double pbg : {0.0, 0.02, 0.04, 0.08, 0.16}) {
        const double w = fock::wigner_at(subtraction::build_model_state({0.374, 0.68, pbg, 13}), 0, 0);
        CHECK(w >= prev - 1e-12);
        prev = w;
    }
    prev = -1.0;
    for (double eta : {0.9, 0.8, 0.7, 0.6, 0.5}) {
        const double w = fock::wigner_at(subtraction::build_model_state({0.374, eta, 0.04, 13}), 0, 0);
        CHECK(w >= prev - 1e-12);
        prev = w;
    }
}

TEST_CASE("efficiency budget arithmetic") {
    const EfficiencyBudget paper{};
    auto b = subtraction::efficiency_budget(paper);
    CHECK(b.eta_est == doctest::Approx(0.80).epsilon(0.005));
    CHECK(b.eta_tot == doctest::Approx(0.707).epsilon(0.005));
    CHECK(b.eta_cos == doctest::Approx(0.68).epsilon(0.01));
    CHECK(b.eta_sin == doctest::Approx(0.70).epsilon(1e-10));
    CHECK(b.p_background == doctest::Approx(0.038).epsilon(1e-10));

    EfficiencyBudget unity{1.0, 0.0, 1.0, 1.0, 0.0, 1.0, 0.0, 0.0};
    auto u = subtraction::efficiency_budget(unity);
    CHECK(u.eta_est == doctest::Approx(1.0));
    CHECK(u.eta_tot == doctest::Approx(1.0));
    CHECK(u.eta_cos == doctest::Approx(1.0));

    // eta_cos monotone decreasing in beta.
    double prev = 2.0;
    for (double beta : {0.0, 0.1, 0.2, 0.3}) {
        EfficiencyBudget eb = paper;
        eb.beta = beta;
        const double ec = subtraction::efficiency_budget(eb).eta_cos;
        CHECK(ec < prev);
        prev = ec;
    }
}
