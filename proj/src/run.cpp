#include "mcmod/run.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "json.hpp"
#include "mcmod/config_json.hpp"
#include "mcmod/engine.hpp"
#include "mcmod/metrics.hpp"
#include "mcmod/oracles.hpp"
#include "mcmod/presets.hpp"

namespace mcmod {
namespace {

using Json = nlohmann::ordered_json;

std::filesystem::path with_suffix(const std::filesystem::path& p, const std::string& suffix) {
    return p.string() + suffix;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::vector<cd> flatten(const Waveform& wf) {
    std::vector<cd> out;
    out.reserve(wf.outputs.size() * static_cast<std::size_t>(wf.length()));
    for (const auto& v : wf.outputs) out.insert(out.end(), v.data(), v.data() + v.size());
    return out;
}

// Reference waveform matching the preset, plus a description of the check.
struct OracleRun {
    oracles::OracleReport report;
    std::string method;
};

OracleRun oracle_check(const Preset& preset, std::span<const DataFrame> frames, const Waveform& wf) {
    constexpr double tolerance = 1e-10;
    constexpr double constant_tolerance = 1e-9;
    const auto& c = preset.config;
    if (preset.name == "cp-ofdm") {
        VectorXcd ref(wf.length());
        const Index stride = wf.frame_stride;
        for (std::size_t i = 0; i < frames.size(); ++i) {
            const VectorXcd sym = frames[i].streams.front().row(0).transpose();
            ref.segment(static_cast<Index>(i) * stride, stride) = oracles::ofdm_reference(sym, c.tier2.cyclic_prefix);
        }
        return {oracles::compare(ref, wf.outputs.front(), tolerance), "unnormalized IDFT + cyclic prefix"};
    }
    if (preset.name == "sc-fdma") {
        VectorXcd ref(wf.length());
        const Index stride = wf.frame_stride;
        for (std::size_t i = 0; i < frames.size(); ++i) {
            const VectorXcd sym = frames[i].streams.front().row(0).transpose();
            ref.segment(static_cast<Index>(i) * stride, stride) = oracles::scfdma_reference(sym);
        }
        const auto fit = oracles::fit_global_constant(ref, wf.outputs.front());
        const VectorXcd scaled = fit.constant * ref;
        auto report = oracles::compare(scaled, wf.outputs.front(), constant_tolerance);
        std::ostringstream os;
        os << "DFT-spread OFDM, global constant " << fit.constant.real() << (fit.constant.imag() < 0 ? "" : "+")
           << fit.constant.imag() << "j";
        return {report, os.str()};
    }
    const Waveform ref = oracles::scalar_reference(c, frames);
    return {oracles::compare(ref.outputs, wf.outputs, tolerance), "scalar index-formula evaluation"};
}

}  // namespace

std::vector<std::string> check_manifest(const RunManifest& m) {
    std::vector<std::string> out;
    if (m.preset.empty() == m.config_path.empty()) out.push_back("give exactly one of --preset or --config");
    if (m.data_path.empty() == !m.prbs_seed.has_value()) out.push_back("give exactly one of --data or --prbs-seed");
    if (m.prbs_seed && m.symbol_count < 1) out.push_back("--symbols must be >= 1 with --prbs-seed");
    if (m.out.empty()) out.push_back("--out is required");
    return out;
}

int run(const RunManifest& m, std::ostream& log) {
    if (auto problems = check_manifest(m); !problems.empty()) {
        for (const auto& p : problems) log << "error: " << p << '\n';
        return exit_invalid;
    }

    try {
        Preset preset;
        if (!m.preset.empty()) {
            const auto proto = m.prototype_path.empty() ? default_prototype_file(32) : m.prototype_path;
            preset = preset_by_name(m.preset, proto);
        } else {
            preset = {"custom", load_config(m.config_path).config, InputMapper::Identity};
        }
        const ValidatedConfig vc = validate(preset.config);

        const std::vector<cd> symbols = m.prbs_seed ? io::prbs_symbols(*m.prbs_seed, m.constellation, m.symbol_count)
                                                    : io::read_iq(m.data_path);
        const auto frames = frame_for_preset(preset, symbols);
        const Waveform wf = modulate(vc, std::span<const DataFrame>(frames));
        const auto samples = flatten(wf);
        io::write_iq(m.out, samples);

        Json meta;
        meta["format"] = "cf64le";
        meta["samples"] = wf.length();
        meta["outputs"] = static_cast<Index>(wf.outputs.size());
        meta["frames"] = wf.frame_count;
        meta["frame_length"] = wf.frame_length;
        meta["frame_stride"] = wf.frame_stride;
        meta["rate"] = std::to_string(wf.rate.num) + "/" + std::to_string(wf.rate.den);
        meta["rate_multiplier"] = wf.rate.value();
        meta["config_digest"] = hex64(wf.config_digest);
        meta["config_source"] = m.preset.empty() ? m.config_path.string() : m.preset;
        if (m.prbs_seed) {
            meta["data_source"] = {{"prbs_seed", *m.prbs_seed},
                                   {"constellation", io::to_string(m.constellation)},
                                   {"symbols", m.symbol_count}};
        } else {
            meta["data_source"] = {{"file", m.data_path.string()}, {"symbols", static_cast<Index>(symbols.size())}};
        }
        meta["tool_version"] = m.tool_version;
        write_text(with_suffix(m.out, ".json"), meta.dump(2) + "\n");
        log << "wrote " << wf.length() << " samples x " << wf.outputs.size() << " output(s), " << wf.frame_count
            << " frame(s) to " << m.out.string() << '\n';

        if (m.psd) {
            const auto spec = psd(samples, std::min<Index>(m.psd_segment, static_cast<Index>(samples.size())),
                                  std::min<Index>(m.psd_overlap, std::min<Index>(m.psd_segment, Index(samples.size())) - 1));
            std::ostringstream os;
            os.precision(10);
            os << "frequency,power_db\n";
            for (std::size_t i = 0; i < spec.frequency.size(); ++i)
                os << spec.frequency[i] << ',' << spec.power_db[i] << '\n';
            write_text(with_suffix(m.out, ".psd.csv"), os.str());
        }
        if (m.papr) {
            const auto r = papr(samples);
            Json j;
            j["papr_linear"] = r.linear;
            j["papr_db"] = r.db;
            write_text(with_suffix(m.out, ".papr.json"), j.dump(2) + "\n");
            log << "PAPR " << r.db << " dB\n";
        }
        if (m.emit_matrix) {
            const Index entries = vc.config.outputs * vc.lengths.stream_length * vc.lengths.symbols_per_frame;
            if (entries > emit_matrix_limit) {
                log << "error: composite matrix would have " << entries << " entries (limit " << emit_matrix_limit
                    << ")\n";
                return exit_invalid;
            }
            const MatrixXcd g = composite_matrix(vc);
            std::vector<cd> rowmajor;
            rowmajor.reserve(static_cast<std::size_t>(g.size()));
            for (Index r = 0; r < g.rows(); ++r)
                for (Index c = 0; c < g.cols(); ++c) rowmajor.push_back(g(r, c));
            io::write_iq(with_suffix(m.out, ".matrix"), rowmajor);
            Json j;
            j["format"] = "cf64le";
            j["order"] = "row-major";
            j["rows"] = g.rows();
            j["cols"] = g.cols();
            write_text(with_suffix(m.out, ".matrix.json"), j.dump(2) + "\n");
        }
        if (m.oracle_check) {
            const auto result = oracle_check(preset, frames, wf);
            log << "oracle (" << result.method << "): " << result.report.summary() << '\n';
            if (!result.report.pass) return exit_oracle_mismatch;
        }
    } catch (const ValidationError& e) {
        log << "error: " << e.what() << '\n';
        return exit_invalid;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return exit_invalid;
    }
    return exit_ok;
}

}  // namespace mcmod
