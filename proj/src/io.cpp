#include "sidecat/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sidecat::io {

using nlohmann::json;

namespace {

constexpr char kMagic[4] = {'S', 'C', 'T', 'R'};

void write_f32_block(std::ofstream& out, const Eigen::MatrixXd& m) {
    std::vector<float> row(std::size_t(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) row[std::size_t(j)] = float(m(i, j));
        out.write(reinterpret_cast<const char*>(row.data()),
                  std::streamsize(row.size() * sizeof(float)));
    }
}

void read_f32_block(std::ifstream& in, Eigen::MatrixXd& m) {
    std::vector<float> row(std::size_t(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        in.read(reinterpret_cast<char*>(row.data()), std::streamsize(row.size() * sizeof(float)));
        if (!in) throw IOError("trace file truncated");
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = double(row[std::size_t(j)]);
    }
}

}  // namespace

void write_trace_file(const std::string& path, const homodyne::HomodyneTraceSet& traces) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IOError("write_trace_file: cannot open " + path);
    const json header{{"t0_ns", traces.t0_ns},
                      {"dt_ns", traces.dt_ns},
                      {"n_traces", traces.i_traces.rows()},
                      {"n_samples", traces.i_traces.cols()},
                      {"phases_rad", traces.phase_per_trace}};
    const std::string htext = header.dump();
    const std::uint32_t hlen = std::uint32_t(htext.size());
    out.write(kMagic, 4);
    out.write(reinterpret_cast<const char*>(&hlen), 4);
    out.write(htext.data(), std::streamsize(htext.size()));
    write_f32_block(out, traces.i_traces);
    write_f32_block(out, traces.q_traces);
    if (!out) throw IOError("write_trace_file: short write to " + path);
}

homodyne::HomodyneTraceSet read_trace_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IOError("read_trace_file: cannot open " + path);
    char magic[4];
    std::uint32_t hlen = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&hlen), 4);
    if (!in || std::string(magic, 4) != std::string(kMagic, 4))
        throw IOError("read_trace_file: bad magic in " + path);
    std::string htext(hlen, '\0');
    in.read(htext.data(), hlen);
    json header;
    try {
        header = json::parse(htext);
    } catch (const json::exception& e) {
        throw IOError(std::string("read_trace_file: bad header: ") + e.what());
    }
    homodyne::HomodyneTraceSet traces;
    traces.t0_ns = header.at("t0_ns");
    traces.dt_ns = header.at("dt_ns");
    const Eigen::Index n_traces = header.at("n_traces");
    const Eigen::Index n_samples = header.at("n_samples");
    traces.phase_per_trace = header.at("phases_rad").get<std::vector<double>>();
    traces.i_traces.resize(n_traces, n_samples);
    traces.q_traces.resize(n_traces, n_samples);
    read_f32_block(in, traces.i_traces);
    read_f32_block(in, traces.q_traces);
    return traces;
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw IOError("write_csv: cannot open " + path);
    out << header << "\n";
    out.precision(12);
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
}

void write_temporal_mode_csv(const std::string& path, const spectral::TemporalMode& mode) {
    std::vector<std::vector<double>> rows;
    rows.reserve(mode.samples.size());
    for (std::size_t i = 0; i < mode.samples.size(); ++i)
        rows.push_back({mode.time_at(i), mode.samples[i]});
    write_csv(path, "t_ns,amplitude", rows);
}

void write_quadrature_csv(const std::string& path, const homodyne::QuadratureDataset& data) {
    std::vector<std::vector<double>> rows;
    rows.reserve(data.phase.size());
    for (std::size_t i = 0; i < data.phase.size(); ++i)
        rows.push_back({data.phase[i], data.value[i]});
    write_csv(path, "phase_rad,quadrature", rows);
}

std::string density_to_json(const fock::DensityMatrix& rho) {
    const int d = rho.cutoff + 1;
    std::vector<double> re, im;
    re.reserve(std::size_t(d) * d);
    im.reserve(std::size_t(d) * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            re.push_back(rho.mat(i, j).real());
            im.push_back(rho.mat(i, j).imag());
        }
    return json{{"cutoff", rho.cutoff}, {"re", re}, {"im", im}}.dump();
}

fock::DensityMatrix density_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw IOError(std::string("density_from_json: ") + e.what());
    }
    const int cutoff = j.at("cutoff");
    const int d = cutoff + 1;
    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.at("im").get<std::vector<double>>();
    if (int(re.size()) != d * d || int(im.size()) != d * d)
        throw IOError("density_from_json: size mismatch");
    fock::DensityMatrix rho{fock::Mat(d, d), cutoff};
    for (int i = 0; i < d; ++i)
        for (int j2 = 0; j2 < d; ++j2)
            rho.mat(i, j2) = fock::Complex(re[std::size_t(i) * d + j2], im[std::size_t(i) * d + j2]);
    return rho;
}

void save_density(const fock::DensityMatrix& rho, const std::string& path) {
    write_text(path, density_to_json(rho));
}

fock::DensityMatrix load_density(const std::string& path) {
    return density_from_json(read_text(path));
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IOError("write_text: cannot open " + path);
    out << text;
    if (!out) throw IOError("write_text: short write to " + path);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IOError("read_text: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string content_hash(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

std::string file_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IOError("file_hash: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return content_hash(ss.str());
}

}  // namespace sidecat::io
