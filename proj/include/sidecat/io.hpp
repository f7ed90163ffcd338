#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sidecat/errors.hpp"
#include "sidecat/fock.hpp"
#include "sidecat/homodyne.hpp"
#include "sidecat/spectral.hpp"

// File formats: binary trace container, CSV tables, density-matrix JSON.
namespace sidecat::io {

// Trace container: magic "SCTR", uint32 LE header length, JSON header
// {t0_ns, dt_ns, n_traces, n_samples, phases_rad}, then the I block and the
// Q block as row-major little-endian float32.
void write_trace_file(const std::string& path, const homodyne::HomodyneTraceSet& traces);
homodyne::HomodyneTraceSet read_trace_file(const std::string& path);

// CSV with a header line; one row per entry.
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows);

void write_temporal_mode_csv(const std::string& path, const spectral::TemporalMode& mode);
void write_quadrature_csv(const std::string& path, const homodyne::QuadratureDataset& data);

// {cutoff, re, im} with row-major matrix entries.
std::string density_to_json(const fock::DensityMatrix& rho);
fock::DensityMatrix density_from_json(const std::string& text);
void save_density(const fock::DensityMatrix& rho, const std::string& path);
fock::DensityMatrix load_density(const std::string& path);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

// FNV-1a content hash, hex-encoded; used to stamp reports with their inputs.
std::string content_hash(const std::string& bytes);
std::string file_hash(const std::string& path);

}  // namespace sidecat::io
