#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sidecat/homodyne.hpp"
#include "sidecat/kernels.hpp"

using namespace sidecat;
using homodyne::HomodyneConfig;

namespace {

HomodyneConfig ci_config(int n_per_phase = 200) {
    HomodyneConfig cfg;
    for (int k = 0; k < 12; ++k) cfg.lo_phases.push_back(k * M_PI / 12.0);
    cfg.n_traces_per_phase = n_per_phase;
    cfg.n_calibration_traces = 500;
    return cfg;
}

spectral::TemporalMode paper_envelope() {
    return spectral::cat_envelope(spectral::OpoParams{},
                                  spectral::FilterChain{{1 / 30.0, 1 / 2.2, 1 / 3.2}},
                                  spectral::GridSpec{});
}

double variance(const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= double(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    return var / double(v.size());
}

}  // namespace

TEST_CASE("wavepacket sampling: vacuum variance and squeezed spread") {
    auto vac = fock::DensityMatrix::from_ket(fock::vacuum(13));
    auto data = homodyne::sample_wavepacket_quadratures(vac, {0.0}, 100000, 1);
    const double var = variance(data.value);
    // 3 sigma statistical window for n = 1e5 draws of a Gaussian.
    CHECK(var == doctest::Approx(0.5).epsilon(0.02));

    auto sv = fock::apply_loss(
        fock::DensityMatrix::from_ket(fock::squeezed_vacuum(0.426, 13)), 0.70);
    auto d0 = homodyne::sample_wavepacket_quadratures(sv, {0.0}, 100000, 2);
    auto d90 = homodyne::sample_wavepacket_quadratures(sv, {M_PI / 2}, 100000, 3);
    const double db_anti = 10 * std::log10(variance(d0.value) / 0.5);
    const double db_sq = 10 * std::log10(variance(d90.value) / 0.5);
    CHECK(db_anti == doctest::Approx(2.88).epsilon(0.05));
    CHECK(db_sq == doctest::Approx(-2.23).epsilon(0.05));

    // Bimodal phase of a cat marginal has sub-Gaussian kurtosis.
    auto cat = fock::DensityMatrix::from_ket(fock::odd_cat(0.9, 13));
    auto dc = homodyne::sample_wavepacket_quadratures(cat, {0.0}, 50000, 4);
    double m2 = 0, m4 = 0;
    for (double x : dc.value) {
        m2 += x * x;
        m4 += x * x * x * x;
    }
    m2 /= double(dc.value.size());
    m4 /= double(dc.value.size());
    CHECK(m4 / (m2 * m2) - 3.0 < -0.2);

    // Seeded determinism.
    auto again = homodyne::sample_wavepacket_quadratures(vac, {0.0}, 100, 1);
    auto first = homodyne::sample_wavepacket_quadratures(vac, {0.0}, 100, 1);
    for (std::size_t i = 0; i < 100; ++i) CHECK(again.value[i] == first.value[i]);
}

TEST_CASE("marginal pdf normalizes and matches vacuum Gaussian") {
    auto vac = fock::DensityMatrix::from_ket(fock::vacuum(13));
    std::vector<double> x;
    for (double v = -8; v <= 8; v += 0.01) x.push_back(v);
    auto p = homodyne::marginal_pdf(vac, 0.3, x);
    double integral = 0.0;
    for (double v : p) integral += v * 0.01;
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
    for (std::size_t i = 0; i < x.size(); i += 100)
        CHECK(p[i] == doctest::Approx(std::exp(-x[i] * x[i]) / std::sqrt(M_PI)).epsilon(1e-8));
}

TEST_CASE("detector response: time constant, step response, grid guard") {
    const double fc = 0.014;  // GHz
    auto d = homodyne::detector_response(fc, 2.0, 200);
    // DC gain ~ 1 (discrete geometric sum).
    double gain = 0.0;
    for (double v : d.samples) gain += v;
    CHECK(gain == doctest::Approx(1.0).epsilon(0.1));
    // 1/e at 1/(2 pi f_c) ~ 11.4 ns.
    CHECK(d.samples[6] / d.samples[0] ==
          doctest::Approx(std::exp(-2 * M_PI * fc * 12.0)).epsilon(1e-9));
    CHECK_THROWS_AS(homodyne::detector_response(fc, 100.0, 10), GridError);

    // Convolution with a step rises like a first-order system.
    auto dm = homodyne::detector_matrix(fc, 2.0, 200);
    Eigen::VectorXd step = Eigen::VectorXd::Ones(200);
    Eigen::VectorXd out = dm * step;
    CHECK(out[0] < out[50]);
    CHECK(out[199] == doctest::Approx(gain).epsilon(1e-6));
}

TEST_CASE("trace synthesis: determinism, calibration shot noise, channel orthogonality") {
    auto cfg = ci_config(100);
    const spectral::OpoParams opo;
    const subtraction::HeraldedStateModel model{0.374, 0.68, 0.04, 13};
    const auto env = paper_envelope();

    auto t1 = homodyne::synthesize_traces(model, opo, env, cfg);
    auto t2 = homodyne::synthesize_traces(model, opo, env, cfg);
    CHECK((t1.i_traces - t2.i_traces).cwiseAbs().maxCoeff() == 0.0);
    CHECK((t1.q_traces - t2.q_traces).cwiseAbs().maxCoeff() == 0.0);
    cfg.seed = 8;
    auto t3 = homodyne::synthesize_traces(model, opo, env, cfg);
    CHECK((t1.i_traces - t3.i_traces).cwiseAbs().maxCoeff() > 0.0);

    // Calibration: extracting any unit-norm mode gives shot-noise variance 1/2
    // after deconvolving the detector (checked against the raw white level).
    auto calib = homodyne::synthesize_calibration(cfg);
    CHECK(calib.i_traces.rows() == 500);
    // I/Q cross-correlation at zero lag for vacuum input.
    double acc = 0.0, ni = 0.0, nq = 0.0;
    for (Eigen::Index i = 0; i < calib.i_traces.rows(); ++i)
        for (Eigen::Index j = 0; j < calib.i_traces.cols(); ++j) {
            acc += calib.i_traces(i, j) * calib.q_traces(i, j);
            ni += calib.i_traces(i, j) * calib.i_traces(i, j);
            nq += calib.q_traces(i, j) * calib.q_traces(i, j);
        }
    CHECK(std::abs(acc) / std::sqrt(ni * nq) < 0.02);
}

TEST_CASE("injection consistency: extracted quadratures match the injected marginal") {
    auto cfg = ci_config(1600);
    cfg.lo_phases = {0.0, M_PI / 2};
    const spectral::OpoParams opo;
    const subtraction::HeraldedStateModel model{0.374, 0.68, 0.04, 13};
    const auto env = paper_envelope();
    auto traces = homodyne::synthesize_traces(model, opo, env, cfg);

    // Re-extract with the deconvolved injected mode: chi with D^T chi = g.
    const std::size_t nt = std::size_t(traces.i_traces.cols());
    auto g = spectral::resample(env, traces.t0_ns, traces.dt_ns, nt);
    g.normalize();
    const Eigen::MatrixXd dmat = homodyne::detector_matrix(cfg.f_c_ghz(), traces.dt_ns, nt);
    Eigen::Map<const Eigen::VectorXd> gv(g.samples.data(), Eigen::Index(nt));
    const Eigen::VectorXd chi = dmat.transpose().triangularView<Eigen::Upper>().solve(gv);

    const auto rho = subtraction::build_model_state(model);
    for (std::size_t pi = 0; pi < cfg.lo_phases.size(); ++pi) {
        const double phase = cfg.lo_phases[pi];
        std::vector<double> xs;
        for (Eigen::Index i = 0; i < traces.i_traces.rows(); ++i)
            if (traces.phase_per_trace[std::size_t(i)] == phase)
                xs.push_back(traces.i_traces.row(i).dot(chi) * traces.dt_ns);
        // Model moments at this phase.
        std::vector<double> xg;
        for (double v = -8; v <= 8; v += 0.005) xg.push_back(v);
        auto pdf = homodyne::marginal_pdf(rho, phase, xg);
        double mean_th = 0, var_th = 0, norm = 0;
        for (std::size_t j = 0; j < xg.size(); ++j) {
            norm += pdf[j];
            mean_th += xg[j] * pdf[j];
        }
        mean_th /= norm;
        for (std::size_t j = 0; j < xg.size(); ++j)
            var_th += (xg[j] - mean_th) * (xg[j] - mean_th) * pdf[j];
        var_th /= norm;
        const double mean = [&] {
            double m = 0;
            for (double x : xs) m += x;
            return m / double(xs.size());
        }();
        const double var = variance(xs);
        const double n = double(xs.size());
        // 3.5 sigma windows: the seed is fixed, but keep slack against
        // ordinary sampling fluctuation.
        CHECK(std::abs(mean - mean_th) < 3.5 * std::sqrt(var_th / n));
        CHECK(std::abs(var - var_th) < 3.5 * var_th * std::sqrt(2.0 / n));
    }
}

TEST_CASE("config guards") {
    auto cfg = ci_config(10);
    const spectral::OpoParams opo;
    const subtraction::HeraldedStateModel model{0.374, 0.68, 0.04, 13};
    const auto env = paper_envelope();

    auto bad = cfg;
    bad.lo_phases.clear();
    CHECK_THROWS_AS(homodyne::synthesize_traces(model, opo, env, bad), ConfigError);

    bad = cfg;
    bad.t_start_ns = -100;
    bad.t_end_ns = -60;  // misses the envelope entirely
    CHECK_THROWS_AS(homodyne::synthesize_traces(model, opo, env, bad), ConfigError);

    bad = cfg;
    bad.sample_rate_gsps = 0.01;
    CHECK_THROWS_AS(homodyne::synthesize_traces(model, opo, env, bad), GridError);
}
