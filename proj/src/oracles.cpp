#include "mcmod/oracles.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace mcmod::oracles {
namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

Index floor_div(Index a, Index b) {
    Index q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

Index ceil_div(Index a, Index b) { return -floor_div(-a, b); }

Index wrap(Index a, Index n) {
    Index r = a % n;
    return r < 0 ? r + n : r;
}

// Zero prefix, cyclic prefix, core, cyclic suffix, zero suffix along rows;
// output row t corresponds to time n = t - zp - cp.
MatrixXcd extend(const MatrixXcd& x, const CyclicExtension& t) {
    const Index core = x.rows();
    const Index total = core + t.zero_prefix + t.cyclic_prefix + t.cyclic_suffix + t.zero_suffix;
    MatrixXcd y = MatrixXcd::Zero(total, x.cols());
    for (Index row = 0; row < total; ++row) {
        const Index n = row - t.zero_prefix - t.cyclic_prefix;
        if (n < -t.cyclic_prefix || n >= core + t.cyclic_suffix) continue;
        for (Index m = 0; m < x.cols(); ++m) y(row, m) = x(wrap(n, core), m);
    }
    return y;
}

ScalarStage from_config(const FilterStage& s, Index stream) {
    ScalarStage st;
    st.channels = s.channels;
    st.upsampling = s.upsampling;
    st.downsampling = s.downsampling;
    st.period = s.circular_period;
    st.filters = {s.prototype};
    st.time_offset = s.time_offsets[static_cast<std::size_t>(stream)];
    st.decimation_offset = s.decimation_offsets[static_cast<std::size_t>(stream)];
    st.conjugate = s.conjugate;
    st.causal = s.causal;
    return st;
}

}  // namespace

std::string OracleReport::summary() const {
    std::ostringstream os;
    os << (pass ? "PASS" : "FAIL") << " max_abs=" << max_abs_error << " max_rel=" << max_rel_error
       << " worst=(output " << worst_output << ", sample " << worst_sample << ") tol=" << tolerance;
    return os.str();
}

OracleReport compare(std::span<const VectorXcd> reference, std::span<const VectorXcd> candidate, double tolerance) {
    OracleReport r;
    r.tolerance = tolerance;
    if (reference.size() != candidate.size()) {
        r.max_abs_error = r.max_rel_error = std::numeric_limits<double>::infinity();
        r.pass = false;
        return r;
    }
    for (std::size_t k = 0; k < reference.size(); ++k) {
        const auto& a = reference[k];
        const auto& b = candidate[k];
        if (a.size() != b.size()) {
            r.max_abs_error = r.max_rel_error = std::numeric_limits<double>::infinity();
            r.worst_output = static_cast<Index>(k);
            r.pass = false;
            return r;
        }
        const double scale = a.size() ? a.cwiseAbs().maxCoeff() : 0.0;
        for (Index i = 0; i < a.size(); ++i) {
            const double err = std::abs(a(i) - b(i));
            if (err > r.max_abs_error) {
                r.max_abs_error = err;
                r.worst_output = static_cast<Index>(k);
                r.worst_sample = i;
            }
            if (scale > 0) r.max_rel_error = std::max(r.max_rel_error, err / scale);
        }
    }
    r.pass = r.max_abs_error <= tolerance;
    return r;
}

OracleReport compare(const VectorXcd& reference, const VectorXcd& candidate, double tolerance) {
    return compare(std::span<const VectorXcd>(&reference, 1), std::span<const VectorXcd>(&candidate, 1), tolerance);
}

ConstantFit fit_global_constant(const VectorXcd& reference, const VectorXcd& candidate) {
    ConstantFit fit;
    const double energy = reference.squaredNorm();
    fit.constant = energy > 0 ? reference.dot(candidate) / energy : cd(0);
    fit.residual = (candidate - fit.constant * reference).cwiseAbs().maxCoeff();
    return fit;
}

MatrixXcd scalar_stage(const MatrixXcd& input, const ScalarStage& s) {
    const Index rows = input.rows();
    const Index nc = s.period;
    const Index L = s.upsampling;
    const Index o = s.time_offset;
    Index k0 = 0;
    for (const auto& h : s.filters) k0 = std::max<Index>(k0, h.size());
    const double sign = s.conjugate ? -1.0 : 1.0;

    // Input sample u (any integer) seen at circular position mod(L u + o, N_c).
    auto x_at = [&](Index u, Index k) -> cd {
        const Index t = wrap(L * u + o, nc) - o;
        if (t < 0 || t % L != 0 || t / L >= rows) return 0.0;
        return input(t / L, k);
    };

    MatrixXcd bar = MatrixXcd::Zero(nc, s.channels);
    for (Index k = 0; k < s.channels; ++k) {
        const VectorXcd& h = s.filters.size() == 1 ? s.filters.front() : s.filters[static_cast<std::size_t>(k)];
        const cd causal = s.causal ? std::exp(cd(0, -two_pi * double(k) * double(k0 - 1) / (2.0 * double(s.channels))))
                                   : cd(1);
        for (Index n = 0; n < nc; ++n) {
            const Index r = wrap(n - o, nc);
            cd acc = 0.0;
            for (Index u = ceil_div(r - k0 + 1, L); u <= floor_div(r, L); ++u) {
                const Index d = wrap(n - o - L * u, nc);
                const cd tap = d < h.size() ? h(d) : cd(0);
                acc += tap * std::exp(cd(0, sign * two_pi * double(k) * double(d) / double(s.channels))) * x_at(u, k);
            }
            bar(n, k) = causal * acc;
        }
    }

    const Index out_rows = nc / s.downsampling;
    MatrixXcd out(out_rows, s.channels);
    for (Index n = 0; n < out_rows; ++n)
        for (Index k = 0; k < s.channels; ++k) out(n, k) = bar(s.downsampling * n + s.decimation_offset, k);
    return out;
}

Waveform scalar_reference(const ModulatorConfig& c, std::span<const DataFrame> frames) {
    const Index m1 = c.stage1.channels;
    const Index m2 = c.stage2.channels;
    std::vector<std::vector<VectorXcd>> per_frame;

    for (const auto& frame : frames) {
        std::vector<VectorXcd> streams;
        for (Index p = 0; p < c.streams; ++p) {
            const MatrixXcd& x = frame.streams[static_cast<std::size_t>(p)];
            const MatrixXcd x1 = extend(x, c.tier1);

            // Commutator: data subchannel m feeds filter channel e[m].
            MatrixXcd x2 = MatrixXcd::Zero(x1.rows(), m1);
            for (Index m = 0; m < c.occupied_subchannels; ++m)
                for (Index n = 0; n < x1.rows(); ++n) x2(n, c.commutator[static_cast<std::size_t>(m)]) = x1(n, m);

            const MatrixXcd x3 = scalar_stage(x2, from_config(c.stage1, p));
            MatrixXcd y = extend(x3, c.tier2);
            for (Index n = 0; n < y.rows(); ++n) {
                const cd w = c.window.size() == 0 ? cd(1) : (n < c.window.size() ? c.window(n) : cd(0));
                for (Index m = 0; m < m1; ++m) y(n, m) *= w;
            }

            // Multiplexer, with the optional transpose routing.
            const Index routed_cols = c.multiplexer.cols();
            MatrixXcd routed = MatrixXcd::Zero(y.rows(), routed_cols);
            for (Index n = 0; n < y.rows(); ++n)
                for (Index m2i = 0; m2i < routed_cols; ++m2i) {
                    cd acc = 0.0;
                    for (Index m = 0; m < m1; ++m) acc += c.multiplexer(m, m2i) * y(n, m);
                    routed(n, m2i) = acc;
                }
            MatrixXcd r;
            if (!c.transpose) {
                r = routed;
            } else {
                r = MatrixXcd::Zero(routed_cols, m2);
                for (Index i = 0; i < routed_cols; ++i)
                    for (Index k = 0; k < m2; ++k) {
                        cd acc = 0.0;
                        for (Index n = 0; n < y.rows(); ++n) acc += routed(n, i) * c.aux_multiplexer(n, k);
                        r(i, k) = acc;
                    }
            }

            const MatrixXcd y2 = extend(scalar_stage(r, from_config(c.stage2, p)), c.tier3);
            VectorXcd s = VectorXcd::Zero(y2.rows());
            for (Index n = 0; n < y2.rows(); ++n)
                for (Index k = 0; k < m2; ++k) s(n) += y2(n, k);
            streams.push_back(std::move(s));
        }

        std::vector<VectorXcd> outs;
        for (Index k = 0; k < c.outputs; ++k) {
            VectorXcd acc = VectorXcd::Zero(streams.front().size());
            for (Index p = 0; p < c.streams; ++p) acc += c.stream_combiner(k, p) * streams[static_cast<std::size_t>(p)];
            outs.push_back(std::move(acc));
        }
        per_frame.push_back(std::move(outs));
    }

    Waveform wf;
    wf.frame_count = static_cast<Index>(frames.size());
    if (per_frame.empty()) return wf;

    const Index n_s1 = c.symbols_per_frame + c.tier1.zero_prefix + c.tier1.cyclic_prefix + c.tier1.cyclic_suffix +
                       c.tier1.zero_suffix;
    const Index tier2_added = c.tier2.zero_prefix + c.tier2.cyclic_prefix + c.tier2.cyclic_suffix + c.tier2.zero_suffix;
    const Index tier3_added = c.tier3.zero_prefix + c.tier3.cyclic_prefix + c.tier3.cyclic_suffix + c.tier3.zero_suffix;
    const Index stage2_rows = c.transpose ? c.multiplexer.cols()
                                          : n_s1 * c.stage1.upsampling / c.stage1.downsampling + tier2_added;
    const Index stride = stage2_rows * c.stage2.upsampling / c.stage2.downsampling + tier3_added;
    const Index frame_len = per_frame.front().front().size();
    const Index total = (wf.frame_count - 1) * stride + frame_len;

    wf.frame_length = frame_len;
    wf.frame_stride = stride;
    wf.outputs.assign(static_cast<std::size_t>(c.outputs), VectorXcd::Zero(total));
    for (Index i = 0; i < wf.frame_count; ++i)
        for (Index k = 0; k < c.outputs; ++k)
            for (Index n = 0; n < frame_len; ++n)
                wf.outputs[static_cast<std::size_t>(k)](i * stride + n) +=
                    per_frame[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)](n);
    return wf;
}

VectorXcd ofdm_reference(const VectorXcd& symbols, Index cp) {
    const Index n = symbols.size();
    VectorXcd body(n);
    for (Index t = 0; t < n; ++t) {
        cd acc = 0.0;
        for (Index m = 0; m < n; ++m) acc += symbols(m) * std::exp(cd(0, two_pi * double((t * m) % n) / double(n)));
        body(t) = acc;
    }
    VectorXcd out(n + cp);
    out << body.tail(cp), body;
    return out;
}

VectorXcd scfdma_reference(const VectorXcd& symbols, Index subcarriers, Index first_subcarrier, Index cp) {
    const Index m = symbols.size();
    VectorXcd spread(m);
    for (Index k = 0; k < m; ++k) {
        cd acc = 0.0;
        for (Index n = 0; n < m; ++n) acc += symbols(n) * std::exp(cd(0, -two_pi * double((k * n) % m) / double(m)));
        spread(k) = acc;
    }
    VectorXcd grid = VectorXcd::Zero(subcarriers);
    for (Index k = 0; k < m; ++k) grid(first_subcarrier + k) = spread(k);
    VectorXcd body(subcarriers);
    for (Index t = 0; t < subcarriers; ++t) {
        cd acc = 0.0;
        for (Index f = 0; f < subcarriers; ++f)
            acc += grid(f) * std::exp(cd(0, two_pi * double((t * f) % subcarriers) / double(subcarriers)));
        body(t) = acc;
    }
    VectorXcd out(subcarriers + cp);
    out << body.tail(cp), body;
    return out;
}

VectorXcd linear_convolution_reference(const VectorXcd& input, const VectorXcd& h, Index upsampling, Index offset) {
    const Index up_len = input.size() * upsampling;
    VectorXcd up = VectorXcd::Zero(up_len);
    for (Index u = 0; u < input.size(); ++u) up(upsampling * u + offset) = input(u);
    VectorXcd out = VectorXcd::Zero(up_len + h.size() - 1);
    for (Index n = 0; n < out.size(); ++n)
        for (Index d = 0; d < h.size(); ++d)
            if (n - d >= 0 && n - d < up_len) out(n) += h(d) * up(n - d);
    return out;
}

Index column_rank(const MatrixXcd& g) { return Eigen::ColPivHouseholderQR<MatrixXcd>(g).rank(); }

namespace {
MatrixXd real_augmented(const MatrixXcd& g) {
    MatrixXd a(2 * g.rows(), g.cols());
    a << g.real(), g.imag();
    return a;
}
}  // namespace

Index real_column_rank(const MatrixXcd& g) { return Eigen::ColPivHouseholderQR<MatrixXd>(real_augmented(g)).rank(); }

VectorXcd least_squares_recover(const MatrixXcd& g, const VectorXcd& waveform) {
    if (waveform.size() != g.rows()) throw std::invalid_argument("least_squares_recover: waveform length mismatch");
    Eigen::ColPivHouseholderQR<MatrixXcd> qr(g);
    if (qr.rank() < g.cols()) throw RankDeficient(qr.rank(), g.cols());
    return qr.solve(waveform);
}

VectorXd least_squares_recover_real(const MatrixXcd& g, const VectorXcd& waveform) {
    if (waveform.size() != g.rows()) throw std::invalid_argument("least_squares_recover: waveform length mismatch");
    Eigen::ColPivHouseholderQR<MatrixXd> qr(real_augmented(g));
    if (qr.rank() < g.cols()) throw RankDeficient(qr.rank(), g.cols());
    VectorXd b(2 * waveform.size());
    b << waveform.real(), waveform.imag();
    return qr.solve(b);
}

}  // namespace mcmod::oracles
