#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace di {

inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ull;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ull;

inline std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = kFnvOffset) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
  return h;
}

inline std::uint64_t fnv1a(const std::string& s, std::uint64_t h = kFnvOffset) {
  return fnv1a(s.data(), s.size(), h);
}

// Hash of a whole file's bytes; throws on I/O failure.
std::uint64_t hash_file(const std::string& path);

std::string to_hex(std::uint64_t h);

}  // namespace di
