#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "mcmod/config.hpp"
#include "mcmod/engine.hpp"

namespace mcmod::testing {

using Rng = std::mt19937_64;

inline Index uniform(Rng& rng, Index lo, Index hi) { return std::uniform_int_distribution<Index>(lo, hi)(rng); }

inline bool coin(Rng& rng) { return uniform(rng, 0, 1) == 1; }

inline cd random_complex(Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    return {g(rng), g(rng)};
}

inline VectorXcd random_vector(Rng& rng, Index n) {
    VectorXcd v(n);
    for (Index i = 0; i < n; ++i) v(i) = random_complex(rng);
    return v;
}

inline MatrixXcd random_matrix(Rng& rng, Index rows, Index cols) {
    MatrixXcd m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) m(i, j) = random_complex(rng);
    return m;
}

inline std::vector<cd> random_qpsk(Rng& rng, Index count) {
    const double a = 1.0 / std::sqrt(2.0);
    std::vector<cd> out(static_cast<std::size_t>(count));
    for (auto& s : out) s = {coin(rng) ? a : -a, coin(rng) ? a : -a};
    return out;
}

inline VectorXcd to_vector(const std::vector<cd>& v) {
    return Eigen::Map<const VectorXcd>(v.data(), static_cast<Index>(v.size()));
}

inline DataFrame random_frame(Rng& rng, const ModulatorConfig& c) {
    DataFrame f;
    for (Index p = 0; p < c.streams; ++p)
        f.streams.push_back(random_matrix(rng, c.symbols_per_frame, c.occupied_subchannels));
    return f;
}

/// Smallest multiple of step that is >= at_least.
inline Index round_up(Index at_least, Index step) { return (at_least + step - 1) / step * step; }

inline CyclicExtension random_extension(Rng& rng, Index core, Index max_len = 3) {
    CyclicExtension t;
    t.zero_prefix = uniform(rng, 0, max_len);
    t.cyclic_prefix = uniform(rng, 0, std::min(core, max_len));
    t.cyclic_suffix = uniform(rng, 0, std::min(core, max_len));
    t.zero_suffix = uniform(rng, 0, max_len);
    return t;
}

/// Random stage whose period is a multiple of lcm(M, L) covering the
/// upsampled input; extra periods push some draws well into the
/// linear regime while others wrap.
inline FilterStage random_stage(Rng& rng, Index channels, Index streams, Index input_rows, Index max_l, Index max_q,
                                Index max_k0, bool conjugate, bool causal) {
    FilterStage s;
    s.channels = channels;
    s.upsampling = uniform(rng, 1, max_l);
    s.downsampling = uniform(rng, 1, max_q);
    s.prototype = random_vector(rng, uniform(rng, 1, max_k0));
    const Index step = std::lcm(channels, s.upsampling);
    s.circular_period = round_up(std::max(s.upsampling * input_rows, s.prototype.size()), step) +
                         step * uniform(rng, 0, 1);
    for (Index p = 0; p < streams; ++p) {
        s.time_offsets.push_back(uniform(rng, 0, s.upsampling - 1));
        s.decimation_offsets.push_back(uniform(rng, 0, s.downsampling - 1));
    }
    s.conjugate = conjugate;
    s.causal = causal;
    return s;
}

/// Random desk-scale configuration exercising every pipeline block:
/// M1 <= 16, N <= 8, K0 <= 12, M | N_c in both stages.
inline ModulatorConfig random_config(Rng& rng, bool conjugate, bool causal) {
    ModulatorConfig c;
    c.symbols_per_frame = uniform(rng, 1, 8);
    const Index m1 = uniform(rng, 1, 16);
    c.occupied_subchannels = uniform(rng, 1, m1);
    c.streams = uniform(rng, 1, 2);
    c.outputs = uniform(rng, 1, 2);

    std::vector<Index> channels(static_cast<std::size_t>(m1));
    std::iota(channels.begin(), channels.end(), Index(0));
    std::shuffle(channels.begin(), channels.end(), rng);
    c.commutator.assign(channels.begin(), channels.begin() + c.occupied_subchannels);

    c.tier1 = random_extension(rng, c.symbols_per_frame);
    const Index ns1 = c.tier1.extended_length(c.symbols_per_frame);
    c.stage1 = random_stage(rng, m1, c.streams, ns1, 4, 3, 12, conjugate, causal);
    const Index n1 = c.stage1.output_length();
    c.tier2 = random_extension(rng, n1);
    const Index ns2 = c.tier2.extended_length(n1);
    if (coin(rng)) c.window = random_vector(rng, uniform(rng, 0, ns2));

    const Index m2 = uniform(rng, 1, 4);
    c.transpose = coin(rng);
    Index rows2 = ns2;
    if (c.transpose) {
        rows2 = uniform(rng, 1, 3);
        c.multiplexer = random_matrix(rng, m1, rows2);
        c.aux_multiplexer = random_matrix(rng, ns2, m2);
    } else {
        c.multiplexer = random_matrix(rng, m1, m2);
    }
    c.stage2 = random_stage(rng, m2, c.streams, rows2, 3, 2, 6, coin(rng), coin(rng));
    c.tier3 = random_extension(rng, c.stage2.output_length());
    c.stream_combiner = random_matrix(rng, c.outputs, c.streams);
    return c;
}

}  // namespace mcmod::testing
