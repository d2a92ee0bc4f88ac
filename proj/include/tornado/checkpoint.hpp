#pragma once

#include "tornado/state.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace tornado {

inline constexpr char kCheckpointMagic[8] = {'T', 'R', 'N', 'D', 'C', 'K', 'P', 'T'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Binary layout (little-endian, IEEE-754 doubles):
///   char[8]  magic "TRNDCKPT"
///   uint32   version
///   uint32   reserved (0)
///   int64    step
///   double   time
///   uint64   node count N
///   double   velocity[3N] (node-major x,y,z)
///   double   pressure[N]
///   uint64   FNV-1a hash of all preceding bytes
std::string encode_checkpoint(const FieldState& state);
FieldState decode_checkpoint(const std::string& bytes, const std::string& source = "<checkpoint>");

void write_checkpoint(const std::filesystem::path& path, const FieldState& state);
FieldState read_checkpoint(const std::filesystem::path& path);

} // namespace tornado
