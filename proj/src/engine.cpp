#include "mcmod/engine.hpp"

#include <algorithm>
#include <set>

#include "mcmod/operators.hpp"

namespace mcmod {
namespace {

std::string str(Index v) { return std::to_string(v); }

// Checks one filtering stage against an input of input_rows rows.
void check_stage(const FilterStage& s, const std::string& tag, Index streams, Index input_rows,
                 std::vector<std::string>& out) {
    bool factors_ok = true;
    if (s.channels < 1) out.push_back(tag + ": channel count M must be >= 1"), factors_ok = false;
    if (s.upsampling < 1) out.push_back(tag + ": upsampling factor must be >= 1"), factors_ok = false;
    if (s.downsampling < 1) out.push_back(tag + ": downsampling factor must be >= 1"), factors_ok = false;
    if (s.prototype.size() < 1) out.push_back(tag + ": prototype filter is empty");
    if (s.circular_period < 1) out.push_back(tag + ": circular period N_c must be >= 1"), factors_ok = false;

    if (static_cast<Index>(s.time_offsets.size()) != streams)
        out.push_back(tag + ": expected " + str(streams) + " time offsets, got " + str(Index(s.time_offsets.size())));
    if (static_cast<Index>(s.decimation_offsets.size()) != streams)
        out.push_back(tag + ": expected " + str(streams) + " decimation offsets, got " +
                      str(Index(s.decimation_offsets.size())));
    if (!factors_ok) return;

    for (const Index o : s.time_offsets)
        if (o < 0 || o >= s.upsampling)
            out.push_back(tag + ": time offset " + str(o) + " outside [0, " + str(s.upsampling) + ")");
    for (const Index a : s.decimation_offsets)
        if (a < 0 || a >= s.downsampling)
            out.push_back(tag + ": decimation offset " + str(a) + " outside [0, " + str(s.downsampling) + ")");

    if (s.prototype.size() > s.circular_period)
        out.push_back(tag + ": filter length " + str(s.prototype.size()) + " exceeds circular period " +
                      str(s.circular_period));
    if (s.circular_period % s.channels != 0)
        out.push_back(tag + ": circular period " + str(s.circular_period) + " is not a multiple of M = " +
                      str(s.channels));
    if (input_rows > 0 && s.circular_period < s.upsampling * input_rows)
        out.push_back(tag + ": information loss, circular period " + str(s.circular_period) +
                      " is shorter than the upsampled frame " + str(s.upsampling * input_rows));
    if (s.circular_period / s.downsampling < 1)
        out.push_back(tag + ": decimation leaves no output samples");
}

void check_extension(const CyclicExtension& t, const std::string& tag, Index core, std::vector<std::string>& out) {
    if (t.zero_prefix < 0 || t.cyclic_prefix < 0 || t.cyclic_suffix < 0 || t.zero_suffix < 0)
        out.push_back(tag + ": extension lengths must be non-negative");
    if (core > 0 && t.cyclic_prefix > core)
        out.push_back(tag + ": cyclic prefix " + str(t.cyclic_prefix) + " longer than the frame " + str(core));
    if (core > 0 && t.cyclic_suffix > core)
        out.push_back(tag + ": cyclic suffix " + str(t.cyclic_suffix) + " longer than the frame " + str(core));
}

std::vector<std::string> check_impl(const ModulatorConfig& c, DerivedLengths& len) {
    std::vector<std::string> out;
    if (c.symbols_per_frame < 1) out.push_back("N: symbols per frame must be >= 1");
    if (c.occupied_subchannels < 1) out.push_back("M': occupied subchannels must be >= 1");
    if (c.streams < 1) out.push_back("P: stream count must be >= 1");
    if (c.outputs < 1) out.push_back("K: output count must be >= 1");
    if (!out.empty()) return out;

    // Data frame and first extension tier.
    check_extension(c.tier1, "tier 1", c.symbols_per_frame, out);
    len.tier1_length = c.tier1.extended_length(c.symbols_per_frame);

    // Commutator.
    const Index m1 = c.stage1.channels;
    if (m1 < c.occupied_subchannels)
        out.push_back("M1 = " + str(m1) + " is smaller than M' = " + str(c.occupied_subchannels));
    if (static_cast<Index>(c.commutator.size()) != c.occupied_subchannels) {
        out.push_back("e: commutator has " + str(Index(c.commutator.size())) + " entries, expected M' = " +
                      str(c.occupied_subchannels));
    } else {
        std::set<Index> seen;
        for (const Index k : c.commutator) {
            if (k < 0 || k >= m1) out.push_back("e: channel " + str(k) + " outside [0, M1)");
            if (!seen.insert(k).second) out.push_back("e: channel " + str(k) + " assigned twice");
        }
    }

    // First filtering stage.
    const std::size_t before_stage1 = out.size();
    check_stage(c.stage1, "stage 1", c.streams, len.tier1_length, out);
    if (out.size() != before_stage1) return out;
    len.upsampled_length = c.stage1.upsampling * len.tier1_length;
    len.stage1_output = c.stage1.output_length();

    // Second extension tier and window.
    check_extension(c.tier2, "tier 2", len.stage1_output, out);
    len.tier2_length = c.tier2.extended_length(len.stage1_output);
    if (c.window.size() > len.tier2_length)
        out.push_back("w: window has " + str(c.window.size()) + " samples, more than N_s(2) = " +
                      str(len.tier2_length));

    // Multiplexer.
    const Index m2 = c.stage2.channels;
    if (c.multiplexer.rows() != m1 || c.multiplexer.cols() < 1) {
        out.push_back("E2: expected " + str(m1) + " rows, got " + str(c.multiplexer.rows()) + "x" +
                      str(c.multiplexer.cols()));
        return out;
    }
    if (!c.transpose) {
        if (c.multiplexer.cols() != m2)
            out.push_back("E2: has " + str(c.multiplexer.cols()) + " columns, expected M2 = " + str(m2));
        len.stage2_input_rows = len.tier2_length;
    } else {
        if (c.aux_multiplexer.size() == 0) {
            out.push_back("E3: required when b_tran = 1");
        } else if (c.aux_multiplexer.rows() != len.tier2_length || c.aux_multiplexer.cols() != m2) {
            out.push_back("E3: expected " + str(len.tier2_length) + "x" + str(m2) + ", got " +
                          str(c.aux_multiplexer.rows()) + "x" + str(c.aux_multiplexer.cols()));
        }
        len.stage2_input_rows = c.multiplexer.cols();
    }

    // Second filtering stage and third tier.
    const std::size_t before_stage2 = out.size();
    check_stage(c.stage2, "stage 2", c.streams, len.stage2_input_rows, out);
    if (out.size() != before_stage2) return out;
    len.stage2_columns = m2;
    len.stage2_output = c.stage2.output_length();
    check_extension(c.tier3, "tier 3", len.stage2_output, out);
    len.stream_length = c.tier3.extended_length(len.stage2_output);

    if (c.stream_combiner.rows() != c.outputs || c.stream_combiner.cols() != c.streams)
        out.push_back("E4: stream combiner must be K x P = " + str(c.outputs) + "x" + str(c.streams) + ", got " +
                      str(c.stream_combiner.rows()) + "x" + str(c.stream_combiner.cols()));

    // Frame placement at output rate.
    const auto& s1 = c.stage1;
    const auto& s2 = c.stage2;
    const Index stage2_frame =
        c.transpose ? len.stage2_input_rows : len.tier1_length * s1.upsampling / s1.downsampling + c.tier2.added();
    len.frame_stride = stage2_frame * s2.upsampling / s2.downsampling + c.tier3.added();
    if (len.frame_stride < 1) out.push_back("frame stride " + str(len.frame_stride) + " is not positive");

    len.symbols_per_frame = c.streams * c.symbols_per_frame * c.occupied_subchannels;
    Rational rate = Rational(s1.upsampling, s1.downsampling);
    if (c.transpose) rate = rate * Rational(len.stage2_input_rows, len.tier2_length);
    len.output_rate = rate * Rational(s2.upsampling, s2.downsampling);
    return out;
}

bool use_dense(ApplyMode mode, const FilterStage& stage) {
    switch (mode) {
        case ApplyMode::Dense: return true;
        case ApplyMode::Structured: return false;
        case ApplyMode::Auto: break;
    }
    return stage.circular_period <= dense_period_limit;
}

}  // namespace

std::vector<std::string> check(const ModulatorConfig& config) {
    DerivedLengths len;
    return check_impl(config, len);
}

ValidatedConfig validate(const ModulatorConfig& config) {
    ValidatedConfig vc{config, {}};
    auto diagnostics = check_impl(config, vc.lengths);
    if (!diagnostics.empty()) throw ValidationError(std::move(diagnostics));
    return vc;
}

std::vector<DataFrame> frame_input(std::span<const cd> symbols, const ModulatorConfig& config) {
    const Index n = config.symbols_per_frame;
    const Index m = config.occupied_subchannels;
    const Index p = config.streams;
    const Index per_frame = n * m * p;
    if (per_frame < 1) throw InvalidArgument("frame_input: empty frame geometry");
    const Index total = static_cast<Index>(symbols.size());
    const Index frames = (total + per_frame - 1) / per_frame;

    std::vector<DataFrame> out(static_cast<std::size_t>(frames));
    for (Index i = 0; i < frames; ++i) {
        auto& f = out[static_cast<std::size_t>(i)];
        f.index = i;
        f.streams.assign(static_cast<std::size_t>(p), MatrixXcd::Zero(n, m));
        for (Index s = 0; s < per_frame; ++s) {
            const Index src = i * per_frame + s;
            if (src >= total) break;
            const Index stream = s / (n * m);
            const Index r = s % (n * m);
            f.streams[static_cast<std::size_t>(stream)](r / m, r % m) = symbols[static_cast<std::size_t>(src)];
        }
    }
    return out;
}

StageSignal stage_filter(const StageSignal& input, const FilterStage& stage, ApplyMode mode) {
    const Index p = input.stream;
    if (input.values.cols() != stage.channels)
        throw InvalidArgument("stage_filter: input has " + str(input.values.cols()) + " columns, expected M = " +
                              str(stage.channels));
    if (p < 0 || p >= static_cast<Index>(stage.time_offsets.size()) ||
        p >= static_cast<Index>(stage.decimation_offsets.size()))
        throw InvalidArgument("stage_filter: no offsets for stream " + str(p));

    const Index rows = input.values.rows();
    const auto up = build_upsampler(stage.upsampling, stage.time_offsets[static_cast<std::size_t>(p)], rows);
    const auto stuff = build_zero_stuffer(stage.circular_period, up.rows());
    const auto filter = build_circulant_filter(stage.prototype, stage.circular_period);
    const auto mod = build_modulation_matrix(stage.circular_period, stage.channels, stage.conjugate);
    const auto dec = build_decimator(stage.downsampling, stage.decimation_offsets[static_cast<std::size_t>(p)],
                                     stage.circular_period);
    const auto phase = build_phase_vector(stage.channels, stage.filter_length(), stage.causal);

    MatrixXcd y;
    if (use_dense(mode, stage)) {
        const MatrixXcd placed = stuff.dense() * (up.dense() * input.values);
        const MatrixXcd filtered = filter.dense() * mod.hadamard(placed, /*conjugated=*/true);
        y = dec.dense() * (mod.hadamard(filtered) * phase.as_diagonal());
    } else {
        const MatrixXcd placed = stuff.apply(up.apply(input.values));
        const MatrixXcd filtered = filter.apply(mod.hadamard(placed, /*conjugated=*/true));
        y = dec.apply(mod.hadamard(filtered) * phase.as_diagonal());
    }
    return {std::move(y), input.rate * Rational(stage.upsampling, stage.downsampling), p};
}

StageSignal multiplex(const StageSignal& windowed, const MatrixXcd& e2, const MatrixXcd& e3, bool transpose) {
    if (windowed.values.cols() != e2.rows())
        throw InvalidArgument("multiplex: signal has " + str(windowed.values.cols()) + " subchannels, E2 has " +
                              str(e2.rows()) + " rows");
    MatrixXcd routed = windowed.values * e2;
    if (!transpose) return {std::move(routed), windowed.rate, windowed.stream};
    if (e3.size() == 0) throw InvalidArgument("multiplex: E3 is required when b_tran = 1");
    if (e3.rows() != routed.rows())
        throw InvalidArgument("multiplex: E3 has " + str(e3.rows()) + " rows, expected " + str(routed.rows()));
    MatrixXcd r = routed.transpose() * e3;
    const Rational rate = windowed.rate * Rational(r.rows(), windowed.values.rows());
    return {std::move(r), rate, windowed.stream};
}

std::vector<VectorXcd> modulate_frame(const ValidatedConfig& vc, const DataFrame& frame, ApplyMode mode) {
    const auto& c = vc.config;
    const auto& len = vc.lengths;
    if (static_cast<Index>(frame.streams.size()) != c.streams)
        throw InvalidArgument("modulate: frame has " + str(Index(frame.streams.size())) + " streams, expected " +
                              str(c.streams));

    const auto ce1 = build_cyclic_extension(c.tier1.zero_prefix, c.tier1.cyclic_prefix, c.symbols_per_frame,
                                            c.tier1.cyclic_suffix, c.tier1.zero_suffix);
    const auto commutator = build_commutator(std::span<const Index>(c.commutator), c.stage1.channels);
    const auto ce2 = build_cyclic_extension(c.tier2.zero_prefix, c.tier2.cyclic_prefix, len.stage1_output,
                                            c.tier2.cyclic_suffix, c.tier2.zero_suffix);
    const VectorXcd w = c.window.size() == 0 ? VectorXcd::Ones(len.tier2_length) : c.window;
    const auto window = build_window(w, len.tier2_length);
    const auto ce3 = build_cyclic_extension(c.tier3.zero_prefix, c.tier3.cyclic_prefix, len.stage2_output,
                                            c.tier3.cyclic_suffix, c.tier3.zero_suffix);

    std::vector<VectorXcd> streams;
    streams.reserve(static_cast<std::size_t>(c.streams));
    for (Index p = 0; p < c.streams; ++p) {
        const MatrixXcd& x = frame.streams[static_cast<std::size_t>(p)];
        if (x.rows() != c.symbols_per_frame || x.cols() != c.occupied_subchannels)
            throw InvalidArgument("modulate: stream " + str(p) + " is " + str(x.rows()) + "x" + str(x.cols()) +
                                  ", expected N x M' = " + str(c.symbols_per_frame) + "x" +
                                  str(c.occupied_subchannels));
        StageSignal sig{commutator.apply_right(ce1.apply(x)), Rational(1), p};
        sig = stage_filter(sig, c.stage1, mode);
        sig.values = window.apply(ce2.apply(sig.values));
        sig = multiplex(sig, c.multiplexer, c.aux_multiplexer, c.transpose);
        sig = stage_filter(sig, c.stage2, mode);
        streams.push_back(ce3.apply(sig.values).rowwise().sum());
    }

    std::vector<VectorXcd> outputs(static_cast<std::size_t>(c.outputs), VectorXcd::Zero(len.stream_length));
    for (Index k = 0; k < c.outputs; ++k)
        for (Index p = 0; p < c.streams; ++p) {
            const cd weight = c.stream_combiner(k, p);
            if (weight != cd(0)) outputs[static_cast<std::size_t>(k)] += weight * streams[static_cast<std::size_t>(p)];
        }
    return outputs;
}

std::vector<VectorXcd> assemble_frames(std::span<const std::vector<VectorXcd>> per_frame, Index stride) {
    if (stride < 1) throw InvalidArgument("assemble_frames: stride must be positive");
    if (per_frame.empty()) return {};
    const std::size_t outputs = per_frame.front().size();
    const Index frame_len = outputs == 0 ? 0 : per_frame.front().front().size();
    for (const auto& f : per_frame) {
        if (f.size() != outputs) throw InvalidArgument("assemble_frames: frames disagree on output count");
        for (const auto& v : f)
            if (v.size() != frame_len) throw InvalidArgument("assemble_frames: frames differ in length");
    }
    const Index frames = static_cast<Index>(per_frame.size());
    const Index total = (frames - 1) * stride + frame_len;
    std::vector<VectorXcd> out(outputs, VectorXcd::Zero(total));
    for (Index i = 0; i < frames; ++i)
        for (std::size_t k = 0; k < outputs; ++k)
            out[k].segment(i * stride, frame_len) += per_frame[static_cast<std::size_t>(i)][k];
    return out;
}

Waveform modulate(const ValidatedConfig& vc, std::span<const DataFrame> frames, ApplyMode mode) {
    std::vector<std::vector<VectorXcd>> per_frame;
    per_frame.reserve(frames.size());
    for (const auto& f : frames) per_frame.push_back(modulate_frame(vc, f, mode));

    Waveform wf;
    wf.frame_count = static_cast<Index>(frames.size());
    wf.frame_length = vc.lengths.stream_length;
    wf.frame_stride = vc.lengths.frame_stride;
    wf.rate = vc.lengths.output_rate;
    wf.config_digest = config_digest(vc.config);
    wf.outputs = assemble_frames(per_frame, vc.lengths.frame_stride);
    if (wf.outputs.empty()) wf.outputs.assign(static_cast<std::size_t>(vc.config.outputs), VectorXcd());
    return wf;
}

Waveform modulate(const ValidatedConfig& vc, std::span<const cd> symbols, ApplyMode mode) {
    const auto frames = frame_input(symbols, vc.config);
    return modulate(vc, std::span<const DataFrame>(frames), mode);
}

MatrixXcd composite_matrix(const ValidatedConfig& vc, ApplyMode mode) {
    const auto& c = vc.config;
    const Index slots = vc.lengths.symbols_per_frame;
    const Index rows = c.outputs * vc.lengths.stream_length;
    MatrixXcd g(rows, slots);
    std::vector<cd> impulse(static_cast<std::size_t>(slots), cd(0));
    for (Index j = 0; j < slots; ++j) {
        impulse[static_cast<std::size_t>(j)] = cd(1);
        const auto frames = frame_input(impulse, c);
        const auto outs = modulate_frame(vc, frames.front(), mode);
        for (Index k = 0; k < c.outputs; ++k)
            g.col(j).segment(k * vc.lengths.stream_length, vc.lengths.stream_length) =
                outs[static_cast<std::size_t>(k)];
        impulse[static_cast<std::size_t>(j)] = cd(0);
    }
    return g;
}

}  // namespace mcmod
