#pragma once

#include <cstdint>
#include <string_view>

namespace supjump {

inline constexpr std::string_view kVersion = "0.1.0";

// FNV-1a, used to stamp output files with a hash of the full run config.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace supjump
