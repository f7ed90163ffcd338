#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>

#include "sidecat/config.hpp"
#include "sidecat/fock.hpp"
#include "sidecat/homodyne.hpp"
#include "sidecat/io.hpp"
#include "sidecat/spectral.hpp"
#include "sidecat/subtraction.hpp"
#include "sidecat/tomography.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sidecat;

namespace {

struct Common {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    int threads = 1;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config_path, "Config JSON path (defaults used when omitted)");
    cmd->add_option("--out", c.out_dir, "Output directory");
    cmd->add_option("--seed", c.seed, "Master seed override");
    cmd->add_option("--threads", c.threads, "Worker thread cap")->check(CLI::PositiveNumber);
}

config::ExperimentConfig resolve_config(const Common& c, json& inputs) {
    config::ExperimentConfig cfg;
    if (c.config_path.empty()) {
        cfg = config::default_config();
        inputs["config"] = "builtin-defaults";
    } else {
        cfg = config::load(c.config_path);
        inputs["config"] = io::file_hash(c.config_path);
    }
    if (c.seed) {
        cfg.seed = *c.seed;
        cfg.homodyne.seed = *c.seed;
    }
    return cfg;
}

void write_report(const Common& c, const std::string& command,
                  const config::ExperimentConfig& cfg, const json& inputs, json body) {
    body["command"] = command;
    body["config"] = json::parse(config::to_json_string(cfg));
    body["inputs"] = inputs;
    io::write_text((fs::path(c.out_dir) / "report.json").string(), body.dump(2) + "\n");
}

json density_json(const fock::DensityMatrix& rho) { return json::parse(io::density_to_json(rho)); }

int cmd_spectrum(const Common& c) {
    json inputs;
    const auto cfg = resolve_config(c, inputs);
    fs::create_directories(c.out_dir);
    const auto bud = subtraction::efficiency_budget(cfg.budget);
    const double omega0 = cfg.opo.omega_rad_per_ns();
    const double gamma = cfg.opo.gamma_per_ns;
    const int n = 2001;
    std::vector<std::vector<double>> rows;
    double sq_min = 0.0;
    for (int i = 0; i < n; ++i) {
        const double omega = omega0 + gamma * (-8.0 + 16.0 * double(i) / double(n - 1));
        const double r = spectral::r_exact(cfg.opo, omega);
        const double sq = spectral::measured_squeezing_db(cfg.opo, bud.eta_sin, omega, false);
        const double anti = spectral::measured_squeezing_db(cfg.opo, bud.eta_sin, omega, true);
        sq_min = std::min(sq_min, sq);
        rows.push_back({omega / (2.0 * M_PI) * 1e9, r, sq, anti});
    }
    io::write_csv((fs::path(c.out_dir) / "spectrum.csv").string(), "omega_hz,r,sq_db,antisq_db",
                  rows);
    write_report(c, "spectrum", cfg, inputs,
                 json{{"min_sq_db", sq_min}, {"eta", bud.eta_sin}, {"points", n}});
    return 0;
}

int cmd_envelope(const Common& c) {
    json inputs;
    const auto cfg = resolve_config(c, inputs);
    fs::create_directories(c.out_dir);
    const auto envelope = spectral::cat_envelope(cfg.opo, cfg.filters, cfg.grid);
    io::write_temporal_mode_csv((fs::path(c.out_dir) / "envelope.csv").string(), envelope);
    const double fc = cfg.homodyne.f_c_ghz();
    const std::size_t nd = std::size_t(5.0 / (2.0 * M_PI * fc) / cfg.grid.dt_ns) + 1;
    const auto det = homodyne::detector_response(fc, cfg.grid.dt_ns, nd);
    io::write_temporal_mode_csv((fs::path(c.out_dir) / "detector.csv").string(), det);
    std::size_t peak = 0;
    for (std::size_t i = 0; i < envelope.samples.size(); ++i)
        if (envelope.samples[i] > envelope.samples[peak]) peak = i;
    write_report(c, "envelope", cfg, inputs,
                 json{{"peak_t_ns", envelope.time_at(peak)},
                      {"r_eff", subtraction::effective_squeezing(cfg.opo, envelope)}});
    return 0;
}

int cmd_budget(const Common& c) {
    json inputs;
    const auto cfg = resolve_config(c, inputs);
    fs::create_directories(c.out_dir);
    const auto b = subtraction::efficiency_budget(cfg.budget);
    const json out{{"escape", cfg.budget.escape},
                   {"propagation_loss", cfg.budget.propagation_loss},
                   {"interference", cfg.budget.interference},
                   {"homodyne_det", cfg.budget.homodyne_det},
                   {"beta", cfg.budget.beta},
                   {"eta_sin_measured", cfg.budget.eta_sin_measured},
                   {"mod_tap_cos", b.mod_tap_cos},
                   {"mod_tap_sin", b.mod_tap_sin},
                   {"eta_est", b.eta_est},
                   {"eta_tot", b.eta_tot},
                   {"eta_cos", b.eta_cos},
                   {"eta_sin", b.eta_sin},
                   {"p_background", b.p_background}};
    io::write_text((fs::path(c.out_dir) / "budget.json").string(), out.dump(2) + "\n");
    write_report(c, "budget", cfg, inputs, json{{"budget", out}});
    return 0;
}

int cmd_simulate(const Common& c) {
    json inputs;
    auto cfg = resolve_config(c, inputs);
    cfg.homodyne.seed = cfg.seed;
    fs::create_directories(c.out_dir);
    const auto envelope = spectral::cat_envelope(cfg.opo, cfg.filters, cfg.grid);
    const double r_eff = subtraction::effective_squeezing(cfg.opo, envelope);
    const auto bud = subtraction::efficiency_budget(cfg.budget);
    const subtraction::HeraldedStateModel model{r_eff, bud.eta_cos, bud.p_background,
                                                cfg.mle.cutoff};
    const auto traces = homodyne::synthesize_traces(model, cfg.opo, envelope, cfg.homodyne);
    const auto calib = homodyne::synthesize_calibration(cfg.homodyne);
    io::write_trace_file((fs::path(c.out_dir) / "traces.bin").string(), traces);
    io::write_trace_file((fs::path(c.out_dir) / "calibration.bin").string(), calib);

    const auto rho_true = subtraction::build_model_state(model);
    const json truth{{"r_eff", r_eff},
                     {"eta_cos", bud.eta_cos},
                     {"eta_q", cfg.homodyne.eta_q},
                     {"p_background", bud.p_background},
                     {"w00_truth", fock::wigner_at(rho_true, 0.0, 0.0)},
                     {"rho", density_json(rho_true)}};
    io::write_text((fs::path(c.out_dir) / "truth.json").string(), truth.dump(2) + "\n");
    write_report(c, "simulate", cfg, inputs,
                 json{{"n_traces", traces.i_traces.rows()},
                      {"n_samples", traces.i_traces.cols()},
                      {"r_eff", r_eff},
                      {"w00_truth", truth["w00_truth"]},
                      {"traces", io::file_hash((fs::path(c.out_dir) / "traces.bin").string())},
                      {"calibration",
                       io::file_hash((fs::path(c.out_dir) / "calibration.bin").string())}});
    return 0;
}

int cmd_tomo(const Common& c, const std::string& data_dir) {
    json inputs;
    const auto cfg = resolve_config(c, inputs);
    fs::create_directories(c.out_dir);
    const std::string traces_path = (fs::path(data_dir) / "traces.bin").string();
    const std::string calib_path = (fs::path(data_dir) / "calibration.bin").string();
    if (!fs::exists(calib_path))
        throw CalibrationMissing("cmd_tomo: missing " + calib_path);
    const auto traces = io::read_trace_file(traces_path);
    const auto calib = io::read_trace_file(calib_path);
    inputs["traces"] = io::file_hash(traces_path);
    inputs["calibration"] = io::file_hash(calib_path);

    // Theory envelope on the trace grid; deconvolved extractor for ICA init.
    const auto envelope = spectral::cat_envelope(cfg.opo, cfg.filters, cfg.grid);
    auto g = spectral::resample(envelope, traces.t0_ns, traces.dt_ns,
                                std::size_t(traces.i_traces.cols()));
    g.normalize();
    const double fc = cfg.homodyne.f_c_ghz();
    const auto chi_theory = tomography::deconvolve_detector(g, fc);

    const auto ica = tomography::estimate_envelope_ica(traces, cfg.ica, tomography::Channel::I,
                                                       &chi_theory);
    const auto q = tomography::measured_envelope(ica.chi, fc);
    const double overlap = spectral::mode_overlap(q, g);
    io::write_temporal_mode_csv((fs::path(c.out_dir) / "envelope_chi.csv").string(), ica.chi);
    io::write_temporal_mode_csv((fs::path(c.out_dir) / "envelope_measured.csv").string(), q);

    const auto data_i =
        tomography::extract_quadratures(traces, ica.chi, tomography::Channel::I, calib);
    const auto data_q =
        tomography::extract_quadratures(traces, ica.chi, tomography::Channel::Q, calib);
    io::write_quadrature_csv((fs::path(c.out_dir) / "quadratures_i.csv").string(), data_i);
    io::write_quadrature_csv((fs::path(c.out_dir) / "quadratures_q.csv").string(), data_q);

    const auto mle_i = tomography::mle_reconstruct(data_i, cfg.mle);
    const auto mle_q = tomography::mle_reconstruct(data_q, cfg.mle);
    io::save_density(mle_i.rho, (fs::path(c.out_dir) / "rho_i.json").string());
    io::save_density(mle_q.rho, (fs::path(c.out_dir) / "rho_q.json").string());

    // Wigner map of the I-channel state.
    std::vector<std::vector<double>> wrows;
    for (double x = -5.0; x <= 5.0 + 1e-9; x += 0.05)
        for (double p = -5.0; p <= 5.0 + 1e-9; p += 0.05)
            wrows.push_back({x, p, fock::wigner_at(mle_i.rho, x, p)});
    io::write_csv((fs::path(c.out_dir) / "wigner.csv").string(), "x,p,w", wrows);

    const auto boot =
        tomography::bootstrap_wigner(data_i, cfg.mle, 100, 0.0, 0.0, cfg.seed, c.threads);
    const auto cat = fock::best_fit_odd_cat(mle_i.rho);
    const auto qfit = tomography::best_fit_lossy_squeezed(mle_q.rho);

    json body{{"wigner_origin", fock::wigner_at(mle_i.rho, 0.0, 0.0)},
              {"wigner_origin_bootstrap", {{"mean", boot.mean}, {"std", boot.std}}},
              {"best_cat",
               {{"alpha_re", cat.alpha.real()},
                {"alpha_im", cat.alpha.imag()},
                {"fidelity", cat.fidelity}}},
              {"photon_dist_i", fock::photon_distribution(mle_i.rho)},
              {"photon_dist_q", fock::photon_distribution(mle_q.rho)},
              {"q_gaussian_fit", {{"r", qfit.r}, {"eta", qfit.eta}, {"fidelity", qfit.fidelity}}},
              {"envelope_overlap", overlap},
              {"ica", {{"kurtosis", ica.kurtosis}, {"iters", ica.iters}, {"converged", ica.converged}}},
              {"mle_i",
               {{"iters", mle_i.iters},
                {"converged", mle_i.converged},
                {"log_likelihood", mle_i.log_likelihood}}},
              {"mle_q", {{"iters", mle_q.iters}, {"converged", mle_q.converged}}},
              {"rho_i", density_json(mle_i.rho)},
              {"rho_q", density_json(mle_q.rho)}};
    if (fs::exists(fs::path(data_dir) / "truth.json")) {
        const json truth = json::parse(io::read_text((fs::path(data_dir) / "truth.json").string()));
        body["w00_truth"] = truth.at("w00_truth");
        body["w00_error"] =
            std::abs(double(truth.at("w00_truth")) - double(body.at("wigner_origin")));
    }
    write_report(c, "tomo", cfg, inputs, body);
    if (!ica.converged || !mle_i.converged || !mle_q.converged) {
        std::cerr << "tomo: non-convergence flagged; partial report written\n";
        return 3;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sideband cat-state simulation and tomography toolkit"};
    app.require_subcommand(1);

    Common c_spectrum, c_envelope, c_simulate, c_tomo, c_budget;
    std::string data_dir;
    add_common(app.add_subcommand("spectrum", "Squeezing spectrum tables"), c_spectrum);
    add_common(app.add_subcommand("envelope", "Heralded-mode envelope and detector kernel"),
               c_envelope);
    add_common(app.add_subcommand("simulate", "Synthesize homodyne traces and truth state"),
               c_simulate);
    auto* tomo = app.add_subcommand("tomo", "Run the full tomography pipeline");
    add_common(tomo, c_tomo);
    tomo->add_option("--data", data_dir, "Directory with traces.bin/calibration.bin")->required();
    add_common(app.add_subcommand("budget", "Efficiency budget arithmetic"), c_budget);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand("spectrum")) return cmd_spectrum(c_spectrum);
        if (app.got_subcommand("envelope")) return cmd_envelope(c_envelope);
        if (app.got_subcommand("simulate")) return cmd_simulate(c_simulate);
        if (app.got_subcommand("tomo")) return cmd_tomo(c_tomo, data_dir);
        if (app.got_subcommand("budget")) return cmd_budget(c_budget);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const IOError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
