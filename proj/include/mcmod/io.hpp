#pragma once

// IQ sample files and reproducible test symbols.
//
// IQ format: headerless little-endian IEEE-754 float64 pairs, I then Q,
// one pair per complex sample. Data files for --data use the same layout.
//
// PRBS: 64-bit LCG  x_{k+1} = 6364136223846793005 * x_k + 1442695040888963407
// (mod 2^64), x_0 = seed. Symbol k is drawn from x_{k+1}, most significant
// bits first:
//   qpsk : b0 = bit 63, b1 = bit 62;  s = ((1 - 2 b0) + j (1 - 2 b1)) / sqrt(2)
//   16qam: I from bits 63..62, Q from bits 61..60, Gray levels
//          00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3, scaled by 1/sqrt(10)

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "mcmod/types.hpp"

namespace mcmod::io {

void write_iq(const std::filesystem::path& path, std::span<const cd> samples);
std::vector<cd> read_iq(const std::filesystem::path& path);

enum class Constellation { Qpsk, Qam16 };

Constellation parse_constellation(const std::string& name);
const char* to_string(Constellation c);

class Prbs {
  public:
    using Engine = std::linear_congruential_engine<std::uint64_t, 6364136223846793005ULL, 1442695040888963407ULL, 0>;

    explicit Prbs(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

  private:
    Engine engine_;
};

std::vector<cd> prbs_symbols(std::uint64_t seed, Constellation constellation, Index count);

}  // namespace mcmod::io
