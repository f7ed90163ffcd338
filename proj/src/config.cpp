#include "sidecat/config.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

namespace sidecat::config {

using nlohmann::json;

ExperimentConfig default_config() {
    ExperimentConfig cfg;
    for (int k = 0; k < 12; ++k) cfg.homodyne.lo_phases.push_back(k * M_PI / 12.0);
    cfg.ica.pca_rank = 30;
    cfg.mle.bin_width = 0.05;
    return cfg;
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.opo.gamma_per_ns <= 0 || cfg.opo.fsr_ghz <= 0)
        throw ConfigError("opo: gamma and fsr must be positive");
    if (cfg.opo.epsilon < 0 || cfg.opo.epsilon >= 1)
        throw ConfigError("opo: epsilon must be in [0, 1)");
    if (cfg.filters.decays_per_ns.empty()) throw ConfigError("filters: empty chain");
    for (double g : cfg.filters.decays_per_ns)
        if (g <= 0) throw ConfigError("filters: decays must be positive");
    if (cfg.grid.dt_ns <= 0 || cfg.grid.t_max_ns <= cfg.grid.t_min_ns)
        throw ConfigError("grid: invalid extent");
    if (cfg.modulation.beta < 0) throw ConfigError("modulation: beta must be >= 0");
    for (double f : {cfg.budget.escape, cfg.budget.propagation_loss, cfg.budget.interference,
                     cfg.budget.homodyne_det, cfg.budget.eta_sin_measured,
                     cfg.budget.fake_click_fraction, cfg.budget.mode_mismatch_fraction})
        if (f < 0 || f > 1) throw ConfigError("budget: factors must be in [0, 1]");
    if (cfg.homodyne.sample_rate_gsps <= 0) throw ConfigError("homodyne: bad sample rate");
    if (cfg.homodyne.t_end_ns <= cfg.homodyne.t_start_ns)
        throw ConfigError("homodyne: empty window");
    if (cfg.homodyne.lo_phases.empty()) throw ConfigError("homodyne: lo_phases empty");
    if (cfg.homodyne.n_traces_per_phase < 1 || cfg.homodyne.n_calibration_traces < 1)
        throw ConfigError("homodyne: trace counts must be positive");
    if (cfg.ica.max_iters < 1 || cfg.ica.tol <= 0) throw ConfigError("ica: bad iteration limits");
    if (cfg.mle.cutoff < 1 || cfg.mle.cutoff > 40) throw ConfigError("mle: cutoff out of range");
    if (cfg.mle.max_iters < 1 || cfg.mle.likelihood_tol <= 0)
        throw ConfigError("mle: bad iteration limits");
}

namespace {

json to_json(const ExperimentConfig& c) {
    return json{
        {"opo",
         {{"gamma_per_ns", c.opo.gamma_per_ns},
          {"epsilon", c.opo.epsilon},
          {"fsr_ghz", c.opo.fsr_ghz},
          {"parity", c.opo.parity == spectral::ResonanceParity::anti_resonant_at_carrier
                         ? "anti_resonant_at_carrier"
                         : "resonant_at_carrier"}}},
        {"filters", {{"decays_per_ns", c.filters.decays_per_ns}}},
        {"grid",
         {{"t_min_ns", c.grid.t_min_ns}, {"t_max_ns", c.grid.t_max_ns}, {"dt_ns", c.grid.dt_ns}}},
        {"modulation", {{"beta", c.modulation.beta}, {"theta_rad", c.modulation.theta}}},
        {"budget",
         {{"escape", c.budget.escape},
          {"propagation_loss", c.budget.propagation_loss},
          {"interference", c.budget.interference},
          {"homodyne_det", c.budget.homodyne_det},
          {"beta", c.budget.beta},
          {"eta_sin_measured", c.budget.eta_sin_measured},
          {"fake_click_fraction", c.budget.fake_click_fraction},
          {"mode_mismatch_fraction", c.budget.mode_mismatch_fraction}}},
        {"homodyne",
         {{"sample_rate_gsps", c.homodyne.sample_rate_gsps},
          {"t_start_ns", c.homodyne.t_start_ns},
          {"t_end_ns", c.homodyne.t_end_ns},
          {"f_c_mhz", c.homodyne.f_c_mhz},
          {"lo_phases_rad", c.homodyne.lo_phases},
          {"n_traces_per_phase", c.homodyne.n_traces_per_phase},
          {"n_calibration_traces", c.homodyne.n_calibration_traces},
          {"nfft_color", c.homodyne.nfft_color},
          {"seed", c.homodyne.seed},
          {"eta_q", c.homodyne.eta_q}}},
        {"ica",
         {{"init", c.ica.init == tomography::IcaConfig::Init::theory_envelope ? "theory_envelope"
                                                                              : "random"},
          {"seed", c.ica.seed},
          {"max_iters", c.ica.max_iters},
          {"tol", c.ica.tol},
          {"whiten", c.ica.whiten},
          {"pca_rank", c.ica.pca_rank},
          {"win_start_ns", c.ica.win_start_ns},
          {"win_end_ns", c.ica.win_end_ns}}},
        {"mle",
         {{"cutoff", c.mle.cutoff},
          {"max_iters", c.mle.max_iters},
          {"likelihood_tol", c.mle.likelihood_tol},
          {"bin_width", c.mle.bin_width}}},
        {"seed", c.seed}};
}

ExperimentConfig parse(const json& j) {
    ExperimentConfig c;
    const auto& opo = j.at("opo");
    c.opo.gamma_per_ns = opo.at("gamma_per_ns");
    c.opo.epsilon = opo.at("epsilon");
    c.opo.fsr_ghz = opo.at("fsr_ghz");
    const std::string parity = opo.at("parity");
    if (parity == "anti_resonant_at_carrier")
        c.opo.parity = spectral::ResonanceParity::anti_resonant_at_carrier;
    else if (parity == "resonant_at_carrier")
        c.opo.parity = spectral::ResonanceParity::resonant_at_carrier;
    else
        throw ConfigError("opo.parity: unknown value " + parity);
    c.filters.decays_per_ns = j.at("filters").at("decays_per_ns").get<std::vector<double>>();
    const auto& grid = j.at("grid");
    c.grid.t_min_ns = grid.at("t_min_ns");
    c.grid.t_max_ns = grid.at("t_max_ns");
    c.grid.dt_ns = grid.at("dt_ns");
    const auto& mod = j.at("modulation");
    c.modulation.beta = mod.at("beta");
    c.modulation.theta = mod.at("theta_rad");
    const auto& b = j.at("budget");
    c.budget.escape = b.at("escape");
    c.budget.propagation_loss = b.at("propagation_loss");
    c.budget.interference = b.at("interference");
    c.budget.homodyne_det = b.at("homodyne_det");
    c.budget.beta = b.at("beta");
    c.budget.eta_sin_measured = b.at("eta_sin_measured");
    c.budget.fake_click_fraction = b.at("fake_click_fraction");
    c.budget.mode_mismatch_fraction = b.at("mode_mismatch_fraction");
    const auto& h = j.at("homodyne");
    c.homodyne.sample_rate_gsps = h.at("sample_rate_gsps");
    c.homodyne.t_start_ns = h.at("t_start_ns");
    c.homodyne.t_end_ns = h.at("t_end_ns");
    c.homodyne.f_c_mhz = h.at("f_c_mhz");
    c.homodyne.lo_phases = h.at("lo_phases_rad").get<std::vector<double>>();
    c.homodyne.n_traces_per_phase = h.at("n_traces_per_phase");
    c.homodyne.n_calibration_traces = h.at("n_calibration_traces");
    c.homodyne.nfft_color = h.at("nfft_color");
    c.homodyne.seed = h.at("seed");
    c.homodyne.eta_q = h.at("eta_q");
    const auto& ica = j.at("ica");
    const std::string init = ica.at("init");
    if (init == "theory_envelope")
        c.ica.init = tomography::IcaConfig::Init::theory_envelope;
    else if (init == "random")
        c.ica.init = tomography::IcaConfig::Init::random;
    else
        throw ConfigError("ica.init: unknown value " + init);
    c.ica.seed = ica.at("seed");
    c.ica.max_iters = ica.at("max_iters");
    c.ica.tol = ica.at("tol");
    c.ica.whiten = ica.at("whiten");
    c.ica.pca_rank = ica.at("pca_rank");
    c.ica.win_start_ns = ica.at("win_start_ns");
    c.ica.win_end_ns = ica.at("win_end_ns");
    const auto& mle = j.at("mle");
    c.mle.cutoff = mle.at("cutoff");
    c.mle.max_iters = mle.at("max_iters");
    c.mle.likelihood_tol = mle.at("likelihood_tol");
    c.mle.bin_width = mle.at("bin_width");
    c.seed = j.at("seed");
    return c;
}

}  // namespace

std::string to_json_string(const ExperimentConfig& cfg) { return to_json(cfg).dump(2); }

ExperimentConfig from_json_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse: ") + e.what());
    }
    ExperimentConfig cfg;
    try {
        cfg = parse(j);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config fields: ") + e.what());
    }
    validate(cfg);
    return cfg;
}

void save(const ExperimentConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IOError("config save: cannot open " + path);
    out << to_json_string(cfg) << "\n";
}

ExperimentConfig load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IOError("config load: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json_string(text);
}

}  // namespace sidecat::config
