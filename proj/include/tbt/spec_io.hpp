#ifndef TBT_SPEC_IO_HPP
#define TBT_SPEC_IO_HPP

// JSON spec files.
//
//   {
//     "dims":   [m1, m2, m3],
//     "class":  "general" | "self_adjoint" | "dstu" | "toeplitz3d",
//     "seed":   <optional unsigned integer>,
//     "coeffs": [[re, im], ...]
//   }
//
// `coeffs` lists t_s^{(r)} for r ascending, then s ascending, each block in
// row-major order. A toeplitz3d file may instead carry `taus`, the scalars
// tau_j^{(r,s)} ordered r, then s, then j. Exactly one of the two arrays must
// be present.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "tbt/structured.hpp"

namespace tbt {

struct SpecFile {
  BlockTbtSpec spec;
  std::optional<std::uint64_t> seed;
};

/// Parses a spec document. Throws SchemaError carrying a JSON pointer.
SpecFile spec_from_json(const nlohmann::json& doc);
/// Parses spec text. Throws SchemaError (pointer "") on malformed JSON.
SpecFile parse_spec(const std::string& text);

/// Serializes with fields in the order dims, class, seed, coeffs/taus.
/// toeplitz3d specs are written with `taus`.
nlohmann::ordered_json spec_to_json(const SpecFile& file);
std::string dump_spec(const SpecFile& file);

/// File wrappers; I/O failures raise IoError naming the path.
SpecFile load_spec(const std::filesystem::path& path);
void save_spec(const std::filesystem::path& path, const SpecFile& file);

}  // namespace tbt

#endif  // TBT_SPEC_IO_HPP
