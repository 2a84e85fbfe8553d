#pragma once

// Reference implementations used to verify the matrix pipeline. Nothing in
// here calls into operators.hpp or engine.hpp: every stage is evaluated
// from its scalar index formula with explicit loops, and the textbook
// modulators use direct O(N^2) DFT sums.

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcmod/config.hpp"

namespace mcmod::oracles {

struct OracleReport {
    double max_abs_error = 0.0;
    double max_rel_error = 0.0;
    Index worst_output = 0;
    Index worst_sample = 0;
    double tolerance = 0.0;
    bool pass = true;

    std::string summary() const;
};

/// Samplewise comparison; pass iff max_abs_error <= tolerance. A length
/// mismatch fails with infinite error.
OracleReport compare(std::span<const VectorXcd> reference, std::span<const VectorXcd> candidate, double tolerance);
OracleReport compare(const VectorXcd& reference, const VectorXcd& candidate, double tolerance);

/// Least-squares scalar alpha with candidate ≈ alpha * reference, and the
/// largest residual |candidate - alpha * reference|.
struct ConstantFit {
    cd constant;
    double residual = 0.0;
};
ConstantFit fit_global_constant(const VectorXcd& reference, const VectorXcd& candidate);

/// One filtering stage evaluated sample by sample. filters holds either a
/// single common prototype or one filter per channel.
struct ScalarStage {
    Index channels = 1;
    Index upsampling = 1;
    Index downsampling = 1;
    Index period = 1;
    std::vector<VectorXcd> filters;
    Index time_offset = 0;
    Index decimation_offset = 0;
    bool conjugate = false;
    bool causal = false;
};

/// input is (frame length) x channels; returns floor(period/Q) x channels.
MatrixXcd scalar_stage(const MatrixXcd& input, const ScalarStage& stage);

/// Whole modulator, frame by frame, with the same frame stride as the engine.
Waveform scalar_reference(const ModulatorConfig& config, std::span<const DataFrame> frames);

/// Unnormalized inverse DFT of the symbols with the last cp samples prepended.
VectorXcd ofdm_reference(const VectorXcd& symbols, Index cp = 32);

/// DFT-spread OFDM: unnormalized DFT of the symbols, placed on subcarriers
/// first_subcarrier.., unnormalized inverse DFT of size subcarriers, cp
/// samples of cyclic prefix.
VectorXcd scfdma_reference(const VectorXcd& symbols, Index subcarriers = 128, Index first_subcarrier = 96,
                           Index cp = 32);

/// Upsample by L with offset o (length L*n), then full linear convolution.
VectorXcd linear_convolution_reference(const VectorXcd& input, const VectorXcd& h, Index upsampling, Index offset);

class RankDeficient : public std::runtime_error {
  public:
    RankDeficient(Index rank, Index cols)
        : std::runtime_error("composite matrix is rank deficient: rank " + std::to_string(rank) + " < " +
                             std::to_string(cols) + " columns"),
          rank_(rank) {}
    Index rank() const noexcept { return rank_; }

  private:
    Index rank_;
};

/// argmin_x ||G x - waveform||_2 over complex x. Throws RankDeficient.
VectorXcd least_squares_recover(const MatrixXcd& g, const VectorXcd& waveform);

/// Same over real x, i.e. [Re G; Im G] x = [Re s; Im s]. Used for
/// staggered real-valued (PAM) inputs.
VectorXd least_squares_recover_real(const MatrixXcd& g, const VectorXcd& waveform);

/// Numerical rank of G, and of its real-augmented form.
Index column_rank(const MatrixXcd& g);
Index real_column_rank(const MatrixXcd& g);

}  // namespace mcmod::oracles
