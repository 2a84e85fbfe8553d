#pragma once

#include <span>
#include <vector>

#include "mcmod/types.hpp"

namespace mcmod {

/// Averaged-periodogram spectrum, frequencies in cycles/sample over
/// [-0.5, 0.5), power in dB relative to the peak bin.
struct PowerSpectrum {
    std::vector<double> frequency;
    std::vector<double> power_db;
};

/// Welch estimate with Hann-windowed segments advancing by
/// segment - overlap samples.
PowerSpectrum psd(std::span<const cd> waveform, Index segment, Index overlap);

struct Papr {
    double linear = 0.0;
    double db = 0.0;
};

/// max |s|^2 / mean |s|^2.
Papr papr(std::span<const cd> waveform);

}  // namespace mcmod
