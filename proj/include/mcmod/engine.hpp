#pragma once

// Pipeline of the generic modulator. Per frame and stream p:
//
//   X_p -> C1 X_p E1 -> stage 1 -> C2 . -> W . -> multiplex -> stage 2
//       -> C3 . -> . 1_{M2} -> combine streams -> overlap-add frames
//
// where each filtering stage evaluates
//
//   D (F ∘ (H (F* ∘ (Z U X)))) diag(c)
//
// strictly inside-out; the Hadamard products do not associate with the
// matrix products around them.

#include <span>
#include <string>
#include <vector>

#include "mcmod/config.hpp"

namespace mcmod {

/// How stage operators are applied. Auto materializes dense matrices when
/// the circular period is at most dense_period_limit and falls back to the
/// index-mapped path above it.
enum class ApplyMode { Auto, Dense, Structured };

inline constexpr Index dense_period_limit = 512;

/// One diagnostic per violated constraint; empty when the config is valid.
std::vector<std::string> check(const ModulatorConfig& config);

/// Checks the configuration and records every derived length.
/// Throws ValidationError with the full diagnostic list.
ValidatedConfig validate(const ModulatorConfig& config);

/// Splits a symbol stream into zero-padded frames, filling each frame
/// stream-major, then time, then subchannel.
std::vector<DataFrame> frame_input(std::span<const cd> symbols, const ModulatorConfig& config);

/// Generalized filtering stage for the stream recorded in input.stream.
StageSignal stage_filter(const StageSignal& input, const FilterStage& stage, ApplyMode mode = ApplyMode::Auto);

/// R_p = Ȳ_p E2, or (Ȳ_p E2)^T E3 when transpose is set.
StageSignal multiplex(const StageSignal& windowed, const MatrixXcd& e2, const MatrixXcd& e3, bool transpose);

/// Modulates a single frame; returns one sample vector per output k.
std::vector<VectorXcd> modulate_frame(const ValidatedConfig& vc, const DataFrame& frame,
                                      ApplyMode mode = ApplyMode::Auto);

Waveform modulate(const ValidatedConfig& vc, std::span<const DataFrame> frames, ApplyMode mode = ApplyMode::Auto);
Waveform modulate(const ValidatedConfig& vc, std::span<const cd> symbols, ApplyMode mode = ApplyMode::Auto);

/// Overlap-adds per-frame outputs, frame f starting at sample f*stride.
std::vector<VectorXcd> assemble_frames(std::span<const std::vector<VectorXcd>> per_frame, Index stride);

/// Single-frame modulator as one matrix: column j is the response to a unit
/// symbol at input slot j (frame_input ordering). Outputs are stacked.
MatrixXcd composite_matrix(const ValidatedConfig& vc, ApplyMode mode = ApplyMode::Auto);

}  // namespace mcmod
