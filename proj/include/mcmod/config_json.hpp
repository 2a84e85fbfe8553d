#pragma once

// Flat JSON configuration documents.
//
// Field names follow the conventional symbols:
//
//   N, M_prime, P, K                       frame geometry and output count
//   e                                      commutator (M' channel indices)
//   N_zp1 N_cp1 N_cs1 N_zs1                extension tier 1 (likewise ..2, ..3)
//   M1 L1 Q1 h1 Nc1 o1 a1 b_conj1 b_cas1   filtering stage 1
//   M2 L2 Q2 g  Nc2 o2 a2 b_conj2 b_cas2   filtering stage 2
//   w                                      window samples
//   E2, E3, b_tran                         multiplexer, auxiliary multiplexer, transpose flag
//   E4                                     K x P stream combiner block pattern
//
// Vectors are JSON arrays, matrices arrays of rows. A complex entry is a
// number or an [re, im] pair. h1/g may instead be given as h1_file/g_file,
// a coefficient file resolved relative to the document.
//
// Required: N M_prime P K e M1 L1 Q1 h1 Nc1 M2 L2 Q2 g Nc2 E2 E4 b_tran.
// Optional fields default to zero/false, offsets to zeros, E3 to [] and w
// to all ones.

#include <filesystem>
#include <string>

#include "mcmod/config.hpp"
#include "json.hpp"

namespace mcmod {

/// Parses and validates a document. Throws ValidationError listing every
/// unknown field, missing field, malformed value and violated constraint.
ValidatedConfig parse_config(const nlohmann::ordered_json& document, const std::filesystem::path& base_dir = {});
ValidatedConfig load_config(const std::filesystem::path& path);

nlohmann::ordered_json dump_config(const ModulatorConfig& config);

/// One field per line, each value on a single line.
std::string format_config(const nlohmann::ordered_json& document);

}  // namespace mcmod
