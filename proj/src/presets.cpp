#include "mcmod/presets.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mcmod/engine.hpp"

#ifndef MCMOD_DATA_DIR
#define MCMOD_DATA_DIR "data"
#endif

namespace mcmod {
namespace {

std::vector<Index> iota(Index n) {
    std::vector<Index> v(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i;
    return v;
}

// Single-channel pass-through second stage of length n.
FilterStage delta_stage(Index n, Index streams) {
    FilterStage s;
    s.channels = 1;
    s.upsampling = 1;
    s.downsampling = 1;
    s.prototype = VectorXcd::Ones(1);
    s.circular_period = n;
    s.time_offsets.assign(static_cast<std::size_t>(streams), 0);
    s.decimation_offsets.assign(static_cast<std::size_t>(streams), 0);
    return s;
}

}  // namespace

Preset preset_ofdm() {
    constexpr Index m1 = 128;
    constexpr Index cp = m1 / 4;
    ModulatorConfig c;
    c.symbols_per_frame = 1;
    c.occupied_subchannels = m1;
    c.streams = 1;
    c.outputs = 1;
    c.commutator = iota(m1);

    c.stage1.channels = m1;
    c.stage1.upsampling = m1;
    c.stage1.downsampling = 1;
    c.stage1.prototype = VectorXcd::Ones(m1);
    c.stage1.circular_period = m1;
    c.stage1.time_offsets = {0};
    c.stage1.decimation_offsets = {0};

    c.tier2.cyclic_prefix = cp;
    c.window = VectorXcd::Ones(m1 + cp);
    c.multiplexer = MatrixXcd::Ones(m1, 1);
    c.stage2 = delta_stage(m1 + cp, 1);
    c.stream_combiner = MatrixXcd::Ones(1, 1);
    return {"cp-ofdm", std::move(c), InputMapper::Identity};
}

Preset preset_scfdma() {
    constexpr Index m1 = 32;
    constexpr Index m2 = 128;
    ModulatorConfig c;
    c.symbols_per_frame = 1;
    c.occupied_subchannels = m1;
    c.streams = 1;
    c.outputs = 1;
    c.commutator = iota(m1);

    c.stage1.channels = m1;
    c.stage1.upsampling = m1;
    c.stage1.downsampling = 1;
    c.stage1.prototype = VectorXcd::Ones(m1);
    c.stage1.circular_period = m1;
    c.stage1.time_offsets = {0};
    c.stage1.decimation_offsets = {0};
    c.stage1.conjugate = true;

    c.window = VectorXcd::Ones(m1);
    c.multiplexer = MatrixXcd::Ones(m1, 1);
    c.transpose = true;
    c.aux_multiplexer = MatrixXcd::Zero(m1, m2);
    c.aux_multiplexer.rightCols(m1).setIdentity();

    c.stage2.channels = m2;
    c.stage2.upsampling = m2;
    c.stage2.downsampling = 1;
    c.stage2.prototype = VectorXcd::Ones(m2);
    c.stage2.circular_period = m2;
    c.stage2.time_offsets = {0};
    c.stage2.decimation_offsets = {0};

    c.tier3.cyclic_prefix = m2 / 4;
    c.stream_combiner = MatrixXcd::Ones(1, 1);
    return {"sc-fdma", std::move(c), InputMapper::Identity};
}

Preset preset_fbmc_oqam(const VectorXd& prototype, Index subchannels, Index symbols_per_frame) {
    if (prototype.size() < 1) throw InvalidArgument("fbmc-oqam: empty prototype filter");
    if (subchannels < 2 || subchannels % 2 != 0)
        throw InvalidArgument("fbmc-oqam: subchannel count must be even and >= 2");
    if (symbols_per_frame < 1) throw InvalidArgument("fbmc-oqam: symbols per frame must be >= 1");

    const Index m1 = subchannels;
    const Index k0 = prototype.size();
    // Smallest multiple of M1 in the linear-convolution regime.
    const Index threshold = m1 * symbols_per_frame + k0 - m1 + m1 / 2;
    const Index period = (threshold + m1 - 1) / m1 * m1;

    ModulatorConfig c;
    c.symbols_per_frame = symbols_per_frame;
    c.occupied_subchannels = m1;
    c.streams = 2;
    c.outputs = 1;
    c.commutator = iota(m1);

    c.stage1.channels = m1;
    c.stage1.upsampling = m1;
    c.stage1.downsampling = 1;
    c.stage1.prototype = prototype.cast<cd>();
    c.stage1.circular_period = period;
    c.stage1.time_offsets = {0, m1 / 2};
    c.stage1.decimation_offsets = {0, 0};
    c.stage1.causal = true;

    c.window = VectorXcd::Ones(period);
    c.multiplexer = MatrixXcd::Ones(m1, 1);
    c.stage2 = delta_stage(period, 2);
    c.stream_combiner = MatrixXcd::Ones(1, 2);
    return {"fbmc-oqam", std::move(c), InputMapper::OqamStagger};
}

Preset preset_by_name(const std::string& name, const std::filesystem::path& prototype_file) {
    if (name == "cp-ofdm" || name == "ofdm") return preset_ofdm();
    if (name == "sc-fdma" || name == "scfdma") return preset_scfdma();
    if (name == "fbmc-oqam" || name == "fbmc") {
        return preset_fbmc_oqam(load_prototype(prototype_file));
    }
    throw InvalidArgument("unknown preset '" + name + "' (expected cp-ofdm, sc-fdma or fbmc-oqam)");
}

DataFrame oqam_map(const MatrixXcd& qam, Index frame_index) {
    const Index n = qam.rows();
    const Index m = qam.cols();
    DataFrame f;
    f.index = frame_index;
    f.streams.assign(2, MatrixXcd::Zero(n, m));
    const cd j(0, 1);
    for (Index sc = 0; sc < m; ++sc)
        for (Index t = 0; t < n; ++t) {
            const double re = qam(t, sc).real();
            const double im = qam(t, sc).imag();
            if (sc % 2 == 0) {
                f.streams[0](t, sc) = re;
                f.streams[1](t, sc) = j * im;
            } else {
                f.streams[0](t, sc) = j * im;
                f.streams[1](t, sc) = re;
            }
        }
    return f;
}

MatrixXcd oqam_unmap(const DataFrame& frame) {
    if (frame.streams.size() != 2) throw InvalidArgument("oqam_unmap: expected two streams");
    const auto& s0 = frame.streams[0];
    const auto& s1 = frame.streams[1];
    MatrixXcd a(s0.rows(), s0.cols());
    for (Index sc = 0; sc < s0.cols(); ++sc)
        for (Index t = 0; t < s0.rows(); ++t)
            a(t, sc) = sc % 2 == 0 ? cd(s0(t, sc).real(), s1(t, sc).imag()) : cd(s1(t, sc).real(), s0(t, sc).imag());
    return a;
}

std::vector<DataFrame> frame_for_preset(const Preset& preset, std::span<const cd> symbols) {
    if (preset.input_mapper == InputMapper::Identity) return frame_input(symbols, preset.config);

    // One QAM symbol per (n, m) slot: frame as a single stream, then stagger.
    ModulatorConfig single = preset.config;
    single.streams = 1;
    auto qam_frames = frame_input(symbols, single);
    std::vector<DataFrame> out;
    out.reserve(qam_frames.size());
    for (const auto& f : qam_frames) out.push_back(oqam_map(f.streams.front(), f.index));
    return out;
}

VectorXd load_prototype(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open prototype file " + path.string());
    std::vector<double> taps;
    std::string line;
    Index line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        double v;
        if (!(ss >> v)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            throw InvalidArgument(path.string() + ":" + std::to_string(line_no) + ": not a number");
        }
        taps.push_back(v);
    }
    if (taps.empty()) throw InvalidArgument("prototype file " + path.string() + " holds no coefficients");
    return Eigen::Map<const VectorXd>(taps.data(), static_cast<Index>(taps.size()));
}

std::filesystem::path default_data_dir() {
    if (const char* env = std::getenv("MCMOD_DATA_DIR"); env && *env) return env;
    return MCMOD_DATA_DIR;
}

std::filesystem::path default_prototype_file(Index subchannels) {
    return default_data_dir() / ("phydyas_k4_m" + std::to_string(subchannels) + ".txt");
}

}  // namespace mcmod
