#pragma once

#include <string>

#include "sidecat/errors.hpp"
#include "sidecat/homodyne.hpp"
#include "sidecat/spectral.hpp"
#include "sidecat/subtraction.hpp"
#include "sidecat/tomography.hpp"

// Config aggregation and (de)serialization. Keys carry explicit units in
// their names (gamma_per_ns, fsr_ghz, f_c_mhz, ...); no unit inference.
namespace sidecat::config {

struct ExperimentConfig {
    spectral::OpoParams opo;
    spectral::FilterChain filters{{1.0 / 30.0, 1.0 / 2.2, 1.0 / 3.2}};
    spectral::GridSpec grid;
    subtraction::ModulationParams modulation;
    subtraction::EfficiencyBudget budget;
    homodyne::HomodyneConfig homodyne;
    tomography::IcaConfig ica;
    tomography::MleConfig mle;
    std::uint64_t seed = 7;
};

// CI-scale defaults: 12 phases x 2000 traces, PCA rank 30, binned MLE.
ExperimentConfig default_config();

// Throws ConfigError on violated invariants.
void validate(const ExperimentConfig& cfg);

std::string to_json_string(const ExperimentConfig& cfg);
ExperimentConfig from_json_string(const std::string& text);

void save(const ExperimentConfig& cfg, const std::string& path);
ExperimentConfig load(const std::string& path);

}  // namespace sidecat::config
