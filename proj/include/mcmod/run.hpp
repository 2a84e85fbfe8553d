#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "mcmod/io.hpp"

namespace mcmod {

inline constexpr int exit_ok = 0;
inline constexpr int exit_invalid = 1;
inline constexpr int exit_oracle_mismatch = 2;

/// Largest composite matrix --emit-matrix will write (complex entries).
inline constexpr Index emit_matrix_limit = Index(1) << 22;

struct RunManifest {
    // Exactly one of preset / config_path.
    std::string preset;
    std::filesystem::path config_path;
    std::filesystem::path prototype_path;  // fbmc-oqam prototype; empty selects the shipped default

    // Exactly one of data_path / prbs_seed.
    std::filesystem::path data_path;
    std::optional<std::uint64_t> prbs_seed;
    io::Constellation constellation = io::Constellation::Qpsk;
    Index symbol_count = 0;

    std::filesystem::path out;
    bool psd = false;
    bool papr = false;
    Index psd_segment = 256;
    Index psd_overlap = 128;
    bool emit_matrix = false;
    bool oracle_check = false;
    std::string tool_version;
};

/// Human-readable problems with the manifest itself; empty when usable.
std::vector<std::string> check_manifest(const RunManifest& manifest);

/// Runs the modulator and writes, next to manifest.out:
///   <out>              IQ samples (outputs back to back)
///   <out>.json         metadata sidecar
///   <out>.psd.csv      when psd is requested
///   <out>.papr.json    when papr is requested
///   <out>.matrix(.json) when emit_matrix is requested
/// Returns exit_ok, exit_invalid, or exit_oracle_mismatch.
int run(const RunManifest& manifest, std::ostream& log);

}  // namespace mcmod
