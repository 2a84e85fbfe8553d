#pragma once

// Ready-made parameterizations: CP-OFDM, FBMC-OQAM and SC-FDMA.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mcmod/config.hpp"

namespace mcmod {

enum class InputMapper { Identity, OqamStagger };

struct Preset {
    std::string name;
    ModulatorConfig config;
    InputMapper input_mapper = InputMapper::Identity;
};

/// 128 subcarriers, IDFT first stage, 32-sample cyclic prefix after it.
Preset preset_ofdm();

/// 32-point DFT spread onto the last 32 of 128 subcarriers, 32-sample
/// cyclic prefix after the second stage.
Preset preset_scfdma();

/// OQAM filter bank with the given real prototype. Defaults are 32
/// subchannels and 200 symbols per frame; smaller sizes are accepted for
/// desk-scale experiments.
Preset preset_fbmc_oqam(const VectorXd& prototype, Index subchannels = 32, Index symbols_per_frame = 200);

/// Looks a preset up by CLI name (cp-ofdm, sc-fdma, fbmc-oqam). The FBMC
/// preset reads its prototype from prototype_file.
Preset preset_by_name(const std::string& name, const std::filesystem::path& prototype_file);

/// Splits an N x M' QAM frame a(n, m) into two real-carrying streams:
///   p = 0: Re(a) on even m, j Im(a) on odd m
///   p = 1: j Im(a) on even m, Re(a) on odd m
DataFrame oqam_map(const MatrixXcd& qam, Index frame_index = 0);

/// Recombines the two streams produced by oqam_map.
MatrixXcd oqam_unmap(const DataFrame& frame);

/// Frames a symbol stream according to the preset's input mapper. For
/// OqamStagger, each N x M' block of QAM symbols (time-major, zero-padded)
/// is split by oqam_map.
std::vector<DataFrame> frame_for_preset(const Preset& preset, std::span<const cd> symbols);

/// Reads one real coefficient per line; blank lines and '#' comments are
/// skipped.
VectorXd load_prototype(const std::filesystem::path& path);

/// Directory holding the shipped prototype coefficient files.
std::filesystem::path default_data_dir();

/// Shipped PHYDYAS-style K=4 prototype for the given subchannel count.
std::filesystem::path default_prototype_file(Index subchannels = 32);

}  // namespace mcmod
