// Command-line front end for the generic multicarrier modulator.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mcmod/config_json.hpp"
#include "mcmod/presets.hpp"
#include "mcmod/run.hpp"

#ifndef MCMOD_VERSION
#define MCMOD_VERSION "0.0.0"
#endif

int main(int argc, char** argv) {
    CLI::App app{"Generic multicarrier modulator: CP-OFDM, FBMC-OQAM, SC-FDMA and custom configurations"};
    app.set_version_flag("--version", MCMOD_VERSION);

    mcmod::RunManifest m;
    m.tool_version = MCMOD_VERSION;
    std::string constellation = "qpsk";
    std::string metrics;
    std::string dump_path;
    std::uint64_t seed = 0;

    auto* preset = app.add_option("--preset", m.preset, "cp-ofdm | sc-fdma | fbmc-oqam");
    auto* config = app.add_option("--config", m.config_path, "JSON configuration file")->check(CLI::ExistingFile);
    preset->excludes(config);
    app.add_option("--prototype", m.prototype_path, "FBMC prototype coefficients (one real per line)")
        ->check(CLI::ExistingFile);

    auto* data = app.add_option("--data", m.data_path, "complex float64 I/Q symbol file")->check(CLI::ExistingFile);
    auto* prbs = app.add_option("--prbs-seed", seed, "generate symbols from the 64-bit LCG with this seed");
    data->excludes(prbs);
    app.add_option("--constellation", constellation, "qpsk | 16qam")->check(CLI::IsMember({"qpsk", "16qam"}));
    app.add_option("--symbols", m.symbol_count, "number of generated symbols");

    app.add_option("--out", m.out, "output IQ file");
    app.add_option("--metrics", metrics, "comma-separated: psd,papr");
    app.add_option("--psd-segment", m.psd_segment, "Welch segment length")->capture_default_str();
    app.add_option("--psd-overlap", m.psd_overlap, "Welch segment overlap")->capture_default_str();
    app.add_flag("--emit-matrix", m.emit_matrix, "write the single-frame composite matrix");
    app.add_flag("--oracle-check", m.oracle_check, "compare against the matching reference modulator");
    app.add_option("--dump-config", dump_path, "write the selected preset/config as JSON and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : mcmod::exit_invalid;
    }

    if (*prbs) m.prbs_seed = seed;
    try {
        m.constellation = mcmod::io::parse_constellation(constellation);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return mcmod::exit_invalid;
    }
    for (std::size_t pos = 0; pos < metrics.size();) {
        const auto comma = metrics.find(',', pos);
        const std::string item = metrics.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (item == "psd") {
            m.psd = true;
        } else if (item == "papr") {
            m.papr = true;
        } else if (!item.empty()) {
            std::cerr << "error: unknown metric '" << item << "'\n";
            return mcmod::exit_invalid;
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }

    if (!dump_path.empty()) {
        try {
            const auto cfg = m.preset.empty() ? mcmod::load_config(m.config_path).config
                                              : mcmod::preset_by_name(m.preset, m.prototype_path.empty()
                                                                                    ? mcmod::default_prototype_file(32)
                                                                                    : m.prototype_path)
                                                    .config;
            std::ofstream out(dump_path);
            out << mcmod::format_config(mcmod::dump_config(cfg));
            return out ? mcmod::exit_ok : mcmod::exit_invalid;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return mcmod::exit_invalid;
        }
    }

    return mcmod::run(m, std::cerr);
}
