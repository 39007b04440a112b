#ifndef LHOM_IO_FIELD_IO_HPP
#define LHOM_IO_FIELD_IO_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lhom/coefficient.hpp"

namespace lhom::io {

/// Binary coefficient dump, little-endian:
///   "HGL1" | u32 version | u32 d | u32 L | f64 lambda | f64 values[d * L^d]
/// with values in canonical edge order.
inline constexpr char kFieldMagic[4] = {'H', 'G', 'L', '1'};
inline constexpr std::uint32_t kFieldVersion = 1;
inline constexpr std::size_t kFieldHeaderBytes = 24;

std::vector<std::uint8_t> encode_field(const CoefficientField& a);
CoefficientField decode_field(const std::vector<std::uint8_t>& bytes);

void dump_field(const CoefficientField& a, const std::filesystem::path& path);
CoefficientField load_field(const std::filesystem::path& path);

/// Writes to a temporary sibling and renames over `path` once complete.
void write_atomically(const std::filesystem::path& path, const std::string& contents);

}  // namespace lhom::io

#endif  // LHOM_IO_FIELD_IO_HPP
