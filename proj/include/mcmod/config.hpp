#pragma once

// Parameter set of the generic modulator and the data types flowing
// through it. Field comments give the conventional symbol for each knob.

#include <cstdint>
#include <vector>

#include "mcmod/types.hpp"

namespace mcmod {

/// Zero/cyclic prefix and suffix lengths of one cyclic-extension tier.
struct CyclicExtension {
    Index zero_prefix = 0;    // N_zp
    Index cyclic_prefix = 0;  // N_cp
    Index cyclic_suffix = 0;  // N_cs
    Index zero_suffix = 0;    // N_zs

    Index added() const { return zero_prefix + cyclic_prefix + cyclic_suffix + zero_suffix; }
    Index extended_length(Index core) const { return core + added(); }

    friend bool operator==(const CyclicExtension&, const CyclicExtension&) = default;
};

/// One generalized filtering stage: upsample, circular filter, modulate,
/// compensate causal delay, decimate.
struct FilterStage {
    Index channels = 1;                     // M_s
    Index upsampling = 1;                   // L_s
    Index downsampling = 1;                 // Q_s
    VectorXcd prototype = VectorXcd::Ones(1);  // h (stage 1) or g (stage 2), length K0
    Index circular_period = 1;              // N_c
    std::vector<Index> time_offsets;        // o, one per stream
    std::vector<Index> decimation_offsets;  // a, one per stream
    bool conjugate = false;                 // b_conj
    bool causal = false;                    // b_cas

    Index filter_length() const { return prototype.size(); }
    Index output_length() const { return circular_period / downsampling; }
};

struct ModulatorConfig {
    Index symbols_per_frame = 1;     // N
    Index occupied_subchannels = 1;  // M'
    Index streams = 1;               // P
    Index outputs = 1;               // K

    std::vector<Index> commutator;   // e, M' filter-bank channel indices
    CyclicExtension tier1;
    FilterStage stage1;
    CyclicExtension tier2;
    VectorXcd window;                // w; empty means all ones
    MatrixXcd multiplexer;           // E2, M1 x M2' routing
    MatrixXcd aux_multiplexer;       // E3, used only when transpose is set
    bool transpose = false;          // b_tran
    FilterStage stage2;
    CyclicExtension tier3;
    /// K x P block pattern of the stream combiner; the full combiner is
    /// stream_combiner ⊗ I_{N''}.
    MatrixXcd stream_combiner;
};

/// Lengths implied by a configuration, computed once by validate().
struct DerivedLengths {
    Index tier1_length = 0;        // N_s(1)
    Index upsampled_length = 0;    // L1 * N_s(1)
    Index stage1_output = 0;       // N' = floor(N_c(1) / Q1)
    Index tier2_length = 0;        // N_s(2)
    Index stage2_input_rows = 0;   // rows of R_p
    Index stage2_columns = 0;      // M2
    Index stage2_output = 0;       // floor(N_c(2) / Q2)
    Index stream_length = 0;       // N'' (after the third extension tier)
    Index frame_stride = 0;        // output-rate frame spacing for multi-frame assembly
    Index symbols_per_frame = 0;   // P * N * M'
    Rational output_rate;          // output samples per input symbol period
};

struct ValidatedConfig {
    ModulatorConfig config;
    DerivedLengths lengths;
};

/// P x N x M' input grid for one frame; streams[p](n, m) = x_{p,m,n}.
struct DataFrame {
    Index index = 0;
    std::vector<MatrixXcd> streams;
};

/// Time x subchannel signal between pipeline blocks.
struct StageSignal {
    MatrixXcd values;
    Rational rate;
    Index stream = 0;
};

/// Final baseband samples, one vector per modulator output.
struct Waveform {
    std::vector<VectorXcd> outputs;
    Index frame_count = 0;
    Index frame_length = 0;
    Index frame_stride = 0;
    Rational rate;
    std::uint64_t config_digest = 0;

    Index length() const { return outputs.empty() ? 0 : outputs.front().size(); }
};

/// Stable 64-bit FNV-1a digest over every configuration field.
std::uint64_t config_digest(const ModulatorConfig& config);

}  // namespace mcmod
