#pragma once

#include <cstdint>
#include <string_view>

namespace cliquedec {

/// FNV-1a 64-bit content digest, used for run/config fingerprints and
/// checkpoint integrity. Not cryptographic.
struct Fnv1a64 {
  std::uint64_t state = 0xcbf29ce484222325ull;

  void feed(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      state ^= p[i];
      state *= 0x100000001b3ull;
    }
  }
  void feed(std::string_view s) { feed(s.data(), s.size()); }
  void feed_u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      state ^= (v >> (8 * i)) & 0xff;
      state *= 0x100000001b3ull;
    }
  }
  std::uint64_t digest() const { return state; }
};

inline std::uint64_t fnv1a64(std::string_view s) {
  Fnv1a64 h;
  h.feed(s);
  return h.digest();
}

}  // namespace cliquedec
