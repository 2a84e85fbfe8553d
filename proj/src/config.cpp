#include "mcmod/config.hpp"

#include <bit>
#include <cstring>

namespace mcmod {
namespace {

class Fnv1a {
  public:
    void bytes(const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            state_ ^= p[i];
            state_ *= 0x100000001b3ULL;
        }
    }
    void integer(std::int64_t v) {
        const auto u = static_cast<std::uint64_t>(v);
        unsigned char buf[8];
        for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(u >> (8 * i));
        bytes(buf, 8);
    }
    void real(double v) { integer(std::bit_cast<std::int64_t>(v)); }
    void complex_matrix(const MatrixXcd& m) {
        integer(m.rows());
        integer(m.cols());
        for (Index i = 0; i < m.rows(); ++i)
            for (Index j = 0; j < m.cols(); ++j) {
                real(m(i, j).real());
                real(m(i, j).imag());
            }
    }
    void indices(const std::vector<Index>& v) {
        integer(static_cast<std::int64_t>(v.size()));
        for (auto x : v) integer(x);
    }
    void extension(const CyclicExtension& t) {
        integer(t.zero_prefix);
        integer(t.cyclic_prefix);
        integer(t.cyclic_suffix);
        integer(t.zero_suffix);
    }
    void stage(const FilterStage& s) {
        integer(s.channels);
        integer(s.upsampling);
        integer(s.downsampling);
        complex_matrix(s.prototype);
        integer(s.circular_period);
        indices(s.time_offsets);
        indices(s.decimation_offsets);
        integer(s.conjugate);
        integer(s.causal);
    }
    std::uint64_t value() const { return state_; }

  private:
    std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

}  // namespace

std::uint64_t config_digest(const ModulatorConfig& c) {
    Fnv1a h;
    h.integer(c.symbols_per_frame);
    h.integer(c.occupied_subchannels);
    h.integer(c.streams);
    h.integer(c.outputs);
    h.indices(c.commutator);
    h.extension(c.tier1);
    h.stage(c.stage1);
    h.extension(c.tier2);
    h.complex_matrix(c.window);
    h.complex_matrix(c.multiplexer);
    h.complex_matrix(c.aux_multiplexer);
    h.integer(c.transpose);
    h.stage(c.stage2);
    h.extension(c.tier3);
    h.complex_matrix(c.stream_combiner);
    return h.value();
}

}  // namespace mcmod
