#include "lhom/io/field_io.hpp"

#include <unistd.h>

#include <bit>
#include <cstring>
#include <optional>
#include <fstream>
#include <iterator>

namespace lhom::io {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int k = 0; k < 8; ++k) out.push_back(static_cast<std::uint8_t>(bits >> (8 * k)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  std::uint32_t v = 0;
  for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(p[k]) << (8 * k);
  return v;
}

double get_f64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(p[k]) << (8 * k);
  return std::bit_cast<double>(v);
}

}  // namespace

std::vector<std::uint8_t> encode_field(const CoefficientField& a) {
  std::vector<std::uint8_t> out;
  out.reserve(kFieldHeaderBytes + 8 * static_cast<std::size_t>(a.values().size()));
  out.insert(out.end(), std::begin(kFieldMagic), std::end(kFieldMagic));
  put_u32(out, kFieldVersion);
  put_u32(out, static_cast<std::uint32_t>(a.lattice().dim()));
  put_u32(out, static_cast<std::uint32_t>(a.lattice().side()));
  put_f64(out, a.lambda());
  for (Index e = 0; e < a.values().size(); ++e) put_f64(out, a(e));
  return out;
}

CoefficientField decode_field(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kFieldHeaderBytes) {
    throw IoError("field dump truncated: header needs " + std::to_string(kFieldHeaderBytes) +
                  " bytes, got " + std::to_string(bytes.size()));
  }
  if (std::memcmp(bytes.data(), kFieldMagic, 4) != 0) {
    throw IoError("field dump has wrong magic: expected \"HGL1\"");
  }
  const std::uint32_t version = get_u32(bytes.data() + 4);
  if (version != kFieldVersion) {
    throw IoError("field dump version " + std::to_string(version) + " unsupported (expected " +
                  std::to_string(kFieldVersion) + ")");
  }
  const std::uint32_t d = get_u32(bytes.data() + 8);
  const std::uint32_t L = get_u32(bytes.data() + 12);
  const double lambda = get_f64(bytes.data() + 16);

  std::optional<TorusLattice> lattice;
  try {
    lattice.emplace(static_cast<int>(d), static_cast<int>(L));
  } catch (const InvalidArgument& e) {
    throw IoError(std::string("field dump header: ") + e.what());
  }
  const std::size_t expected =
      kFieldHeaderBytes + 8 * static_cast<std::size_t>(lattice->num_edges());
  if (bytes.size() != expected) {
    throw IoError("field dump truncated or oversized: expected " + std::to_string(expected) +
                  " bytes, got " + std::to_string(bytes.size()));
  }
  EdgeField values(lattice->num_edges());
  for (Index e = 0; e < values.size(); ++e) {
    values(e) = get_f64(bytes.data() + kFieldHeaderBytes + 8 * e);
  }
  try {
    return CoefficientField(*lattice, std::move(values), lambda);
  } catch (const InvalidArgument& e) {
    throw IoError(std::string("field dump payload: ") + e.what());
  }
}

void dump_field(const CoefficientField& a, const std::filesystem::path& path) {
  const auto bytes = encode_field(a);
  write_atomically(path, std::string(bytes.begin(), bytes.end()));
}

CoefficientField load_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open field dump " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_field(bytes);
}

void write_atomically(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::filesystem::remove(tmp);
      throw IoError("write failed for " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace lhom::io
