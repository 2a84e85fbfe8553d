#include "mcmod/io.hpp"

#include <bit>
#include <cmath>
#include <fstream>

namespace mcmod::io {
namespace {

void put_le(unsigned char* out, double v) {
    auto u = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) out[i] = static_cast<unsigned char>(u >> (8 * i));
}

double get_le(const unsigned char* in) {
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(in[i]) << (8 * i);
    return std::bit_cast<double>(u);
}

double gray_level(unsigned bits) {
    switch (bits & 3u) {
        case 0b00: return -3.0;
        case 0b01: return -1.0;
        case 0b11: return 1.0;
        default: return 3.0;
    }
}

}  // namespace

void write_iq(const std::filesystem::path& path, std::span<const cd> samples) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    std::vector<unsigned char> buf(samples.size() * 16);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        put_le(&buf[16 * i], samples[i].real());
        put_le(&buf[16 * i + 8], samples[i].imag());
    }
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<cd> read_iq(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (buf.size() % 16 != 0)
        throw std::runtime_error(path.string() + ": size " + std::to_string(buf.size()) +
                                 " is not a whole number of float64 I/Q pairs");
    std::vector<cd> samples(buf.size() / 16);
    for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = {get_le(&buf[16 * i]), get_le(&buf[16 * i + 8])};
    return samples;
}

Constellation parse_constellation(const std::string& name) {
    if (name == "qpsk") return Constellation::Qpsk;
    if (name == "16qam") return Constellation::Qam16;
    throw InvalidArgument("unknown constellation '" + name + "' (expected qpsk or 16qam)");
}

const char* to_string(Constellation c) { return c == Constellation::Qpsk ? "qpsk" : "16qam"; }

std::vector<cd> prbs_symbols(std::uint64_t seed, Constellation constellation, Index count) {
    Prbs prbs(seed);
    std::vector<cd> out(static_cast<std::size_t>(std::max<Index>(count, 0)));
    const double qpsk_scale = 1.0 / std::sqrt(2.0);
    const double qam_scale = 1.0 / std::sqrt(10.0);
    for (auto& s : out) {
        const std::uint64_t x = prbs.next();
        if (constellation == Constellation::Qpsk) {
            const double i = 1.0 - 2.0 * static_cast<double>(x >> 63);
            const double q = 1.0 - 2.0 * static_cast<double>((x >> 62) & 1u);
            s = cd(i, q) * qpsk_scale;
        } else {
            s = cd(gray_level(static_cast<unsigned>(x >> 62)), gray_level(static_cast<unsigned>(x >> 60))) * qam_scale;
        }
    }
    return out;
}

}  // namespace mcmod::io
