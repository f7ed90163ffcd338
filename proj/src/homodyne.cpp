#include "sidecat/homodyne.hpp"

#include <algorithm>
#include <cmath>

#include "sidecat/fft.hpp"
#include "sidecat/kernels.hpp"
#include "sidecat/rng.hpp"

namespace sidecat::homodyne {

namespace {

constexpr double kXMax = 8.0;
constexpr std::size_t kXGrid = 3201;

std::vector<double> x_grid() {
    std::vector<double> x(kXGrid);
    for (std::size_t j = 0; j < kXGrid; ++j)
        x[j] = -kXMax + 2.0 * kXMax * double(j) / double(kXGrid - 1);
    return x;
}

// One CDF-inversion draw from a tabulated pdf.
double draw_from_cdf(const std::vector<double>& x, const std::vector<double>& cdf,
                     rng::Stream& rg) {
    const double u = rg.uniform() * cdf.back();
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    const std::size_t k = std::size_t(it - cdf.begin());
    if (k == 0) return x.front();
    const double c0 = cdf[k - 1], c1 = cdf[k];
    const double frac = c1 > c0 ? (u - c0) / (c1 - c0) : 0.0;
    return x[k - 1] + frac * (x[k] - x[k - 1]);
}

}  // namespace

std::vector<double> marginal_pdf(const fock::DensityMatrix& rho, double phi,
                                 const std::vector<double>& x) {
    const int d = rho.cutoff + 1;
    const std::size_t m = x.size();
    std::vector<double> psi(std::size_t(d) * m);
    kernels::hermite_batch(x.data(), m, rho.cutoff, psi.data());
    fock::Mat c(d, m);
    for (int n = 0; n < d; ++n) {
        const fock::Complex ph = std::exp(fock::Complex(0.0, n * phi));
        for (std::size_t j = 0; j < m; ++j) c(n, j) = ph * psi[std::size_t(n) * m + j];
    }
    fock::Mat rc = rho.mat * c;
    std::vector<double> p(m);
    for (std::size_t j = 0; j < m; ++j)
        p[j] = std::max(0.0, (c.col(j).adjoint() * rc.col(j))(0, 0).real());
    return p;
}

QuadratureDataset sample_wavepacket_quadratures(const fock::DensityMatrix& rho,
                                                const std::vector<double>& phases,
                                                int n_per_phase, std::uint64_t seed) {
    const auto x = x_grid();
    QuadratureDataset out;
    out.phase.reserve(phases.size() * std::size_t(n_per_phase));
    out.value.reserve(out.phase.capacity());
    for (std::size_t pi = 0; pi < phases.size(); ++pi) {
        const auto pdf = marginal_pdf(rho, phases[pi], x);
        std::vector<double> cdf(pdf.size());
        double acc = 0.0;
        for (std::size_t j = 0; j < pdf.size(); ++j) cdf[j] = (acc += pdf[j]);
        rng::Stream rg = rng::child(seed, pi);
        for (int i = 0; i < n_per_phase; ++i) {
            out.phase.push_back(phases[pi]);
            out.value.push_back(draw_from_cdf(x, cdf, rg));
        }
    }
    return out;
}

spectral::TemporalMode detector_response(double f_c_ghz, double dt_ns, std::size_t n) {
    if (f_c_ghz <= 0) throw ConfigError("detector_response: f_c must be positive");
    const double w = 2.0 * M_PI * f_c_ghz;
    if (dt_ns > 1.0 / w) throw GridError("detector_response: dt too coarse for f_c");
    spectral::TemporalMode d{std::vector<double>(n), 0.0, dt_ns};
    for (std::size_t i = 0; i < n; ++i) d.samples[i] = w * std::exp(-w * double(i) * dt_ns) * dt_ns;
    return d;
}

Eigen::MatrixXd detector_matrix(double f_c_ghz, double dt_ns, std::size_t n) {
    const auto dk = detector_response(f_c_ghz, dt_ns, n);
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(Eigen::Index(n), Eigen::Index(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) d(Eigen::Index(i), Eigen::Index(j)) = dk.samples[i - j];
    return d;
}

namespace {

struct SynthContext {
    std::size_t nt;
    std::size_t nfft;
    double dt;
    std::vector<double> g;         // injected mode on the trace grid, sum g^2 dt = 1
    Eigen::MatrixXd det_t;         // detector matrix transposed
    std::vector<double> sp, sm;    // anti-squeezed / squeezed spectra on coloring bins
};

// One phase block of traces: colored (or white) background, optional
// injection of wavepacket quadratures, detector filtering.
Eigen::MatrixXd synth_block(const SynthContext& ctx, double phase, int n_traces,
                            rng::Stream& rg, const fock::DensityMatrix* rho_inj,
                            bool pumped) {
    const std::size_t nt = ctx.nt, nfft = ctx.nfft;
    Eigen::MatrixXd b(n_traces, Eigen::Index(nt));
    const double amp = std::sqrt(1.0 / (2.0 * ctx.dt));
    std::vector<double> row(nfft);
    const double c2 = std::cos(phase) * std::cos(phase);
    const double s2 = 1.0 - c2;
    for (int i = 0; i < n_traces; ++i) {
        for (std::size_t j = 0; j < nfft; ++j) row[j] = amp * rg.normal();
        if (pumped) {
            auto spec = fft::rfft(row, nfft);
            for (std::size_t k = 0; k < spec.size(); ++k)
                spec[k] *= std::sqrt(c2 * ctx.sp[k] + s2 * ctx.sm[k]);
            const auto colored = fft::irfft(spec, nfft);
            for (std::size_t j = 0; j < nt; ++j) b(i, Eigen::Index(j)) = colored[j];
        } else {
            for (std::size_t j = 0; j < nt; ++j) b(i, Eigen::Index(j)) = row[j];
        }
    }
    if (rho_inj) {
        const auto xg = x_grid();
        const auto pdf = marginal_pdf(*rho_inj, phase, xg);
        std::vector<double> cdf(pdf.size());
        double acc = 0.0;
        for (std::size_t j = 0; j < pdf.size(); ++j) cdf[j] = (acc += pdf[j]);
        Eigen::Map<const Eigen::VectorXd> g(ctx.g.data(), Eigen::Index(nt));
        for (int i = 0; i < n_traces; ++i) {
            const double xs = draw_from_cdf(xg, cdf, rg);
            const double have = b.row(i).dot(g) * ctx.dt;
            b.row(i) += (xs - have) * g.transpose();
        }
    }
    return b * ctx.det_t;
}

SynthContext make_context(const spectral::OpoParams& opo, const spectral::TemporalMode& envelope,
                          const HomodyneConfig& cfg, double eta_i, double eta_q,
                          std::vector<double>& sp_q, std::vector<double>& sm_q) {
    SynthContext ctx;
    ctx.nt = cfg.n_samples();
    ctx.dt = cfg.dt_ns();
    ctx.nfft = std::size_t(cfg.nfft_color);
    if (ctx.nfft < ctx.nt) throw ConfigError("synthesize_traces: nfft_color < window length");
    const double bw = std::max(opo.gamma_per_ns, 2.0 * M_PI * cfg.f_c_ghz());
    if (ctx.dt > 1.0 / bw / 5.0) throw GridError("synthesize_traces: sample rate too low");

    auto g = spectral::resample(envelope, cfg.t_start_ns, ctx.dt, ctx.nt);
    if (g.norm_sq() < 0.9)
        throw ConfigError("synthesize_traces: window misses most of the envelope support");
    g.normalize();
    ctx.g = g.samples;

    ctx.det_t = detector_matrix(cfg.f_c_ghz(), ctx.dt, ctx.nt).transpose();

    const std::size_t nbins = ctx.nfft / 2 + 1;
    ctx.sp.resize(nbins);
    ctx.sm.resize(nbins);
    sp_q.resize(nbins);
    sm_q.resize(nbins);
    const double w0 = opo.omega_rad_per_ns();
    for (std::size_t k = 0; k < nbins; ++k) {
        const double nu = 2.0 * M_PI * double(k) / (double(ctx.nfft) * ctx.dt);
        const double r = spectral::r_lorentzian(opo, w0 + nu);
        ctx.sp[k] = 1.0 + eta_i * (std::exp(2.0 * r) - 1.0);
        ctx.sm[k] = 1.0 + eta_i * (std::exp(-2.0 * r) - 1.0);
        sp_q[k] = 1.0 + eta_q * (std::exp(2.0 * r) - 1.0);
        sm_q[k] = 1.0 + eta_q * (std::exp(-2.0 * r) - 1.0);
    }
    return ctx;
}

}  // namespace

HomodyneTraceSet synthesize_traces(const subtraction::HeraldedStateModel& m,
                                   const spectral::OpoParams& opo,
                                   const spectral::TemporalMode& envelope,
                                   const HomodyneConfig& cfg) {
    if (cfg.lo_phases.empty()) throw ConfigError("synthesize_traces: lo_phases empty");
    std::vector<double> sp_q, sm_q;
    SynthContext ctx = make_context(opo, envelope, cfg, m.eta_cos, cfg.eta_q, sp_q, sm_q);

    const fock::DensityMatrix rho_i = subtraction::build_model_state(m);
    const fock::FockKet sv = fock::squeezed_vacuum(m.r_eff, m.cutoff);
    const fock::DensityMatrix rho_q =
        fock::apply_loss(fock::DensityMatrix::from_ket(sv), cfg.eta_q);

    const std::size_t p = cfg.lo_phases.size();
    const Eigen::Index n_total = Eigen::Index(p) * cfg.n_traces_per_phase;
    HomodyneTraceSet out;
    out.i_traces.resize(n_total, Eigen::Index(ctx.nt));
    out.q_traces.resize(n_total, Eigen::Index(ctx.nt));
    out.phase_per_trace.reserve(std::size_t(n_total));
    out.t0_ns = cfg.t_start_ns;
    out.dt_ns = ctx.dt;

    for (std::size_t pi = 0; pi < p; ++pi) {
        const double phase = cfg.lo_phases[pi];
        rng::Stream rg_i = rng::child(cfg.seed, pi);
        rng::Stream rg_q = rng::child(cfg.seed, 1000 + pi);
        const Eigen::Index row0 = Eigen::Index(pi) * cfg.n_traces_per_phase;
        out.i_traces.middleRows(row0, cfg.n_traces_per_phase) =
            synth_block(ctx, phase, cfg.n_traces_per_phase, rg_i, &rho_i, true);
        // Q channel uses the lossy squeezed-vacuum spectra.
        SynthContext ctx_q = ctx;
        ctx_q.sp = sp_q;
        ctx_q.sm = sm_q;
        out.q_traces.middleRows(row0, cfg.n_traces_per_phase) =
            synth_block(ctx_q, phase, cfg.n_traces_per_phase, rg_q, &rho_q, true);
        for (int i = 0; i < cfg.n_traces_per_phase; ++i) out.phase_per_trace.push_back(phase);
    }
    return out;
}

HomodyneTraceSet synthesize_calibration(const HomodyneConfig& cfg) {
    HomodyneConfig c = cfg;
    if (c.lo_phases.empty()) c.lo_phases = {0.0};
    SynthContext ctx;
    ctx.nt = c.n_samples();
    ctx.dt = c.dt_ns();
    ctx.nfft = std::size_t(c.nfft_color);
    ctx.det_t = detector_matrix(c.f_c_ghz(), ctx.dt, ctx.nt).transpose();

    HomodyneTraceSet out;
    out.t0_ns = c.t_start_ns;
    out.dt_ns = ctx.dt;
    rng::Stream rg_i = rng::child(c.seed, 999);
    rng::Stream rg_q = rng::child(c.seed, 1999);
    out.i_traces = synth_block(ctx, 0.0, c.n_calibration_traces, rg_i, nullptr, false);
    out.q_traces = synth_block(ctx, 0.0, c.n_calibration_traces, rg_q, nullptr, false);
    out.phase_per_trace.assign(std::size_t(c.n_calibration_traces), 0.0);
    return out;
}

}  // namespace sidecat::homodyne
