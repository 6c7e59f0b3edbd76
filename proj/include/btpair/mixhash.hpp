#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <span>

namespace btpair {

// Deterministic 128-bit mixing function. Stands in for the SAFER+-based
// E1/E2/E3 family; every derivation in this library is one call to it with a
// leading domain tag. Not a cryptographic hash.
//
// Padding: 0x80, zeros to an 8-octet boundary, then the input length in
// octets as a little-endian u64 block. Four zero blocks finalize the state.
inline std::array<std::uint8_t, 16> mixhash128(std::span<const std::uint8_t> data) {
  constexpr std::uint64_t kMul = 0x9E3779B97F4A7C15ULL;
  std::uint64_t s0 = 0x736F6D6570736575ULL;
  std::uint64_t s1 = 0x646F72616E646F6DULL;

  auto absorb = [&](std::uint64_t m) {
    s0 = std::rotl(s0 ^ m, 13) * kMul;
    s1 = (s1 + s0) ^ std::rotl(s1, 32);
  };
  auto load_le = [](const std::uint8_t* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
  };

  const std::size_t full = data.size() / 8;
  for (std::size_t i = 0; i < full; ++i) absorb(load_le(data.data() + 8 * i));

  // Tail plus the 0x80 marker always fits one block.
  std::array<std::uint8_t, 8> tail{};
  const std::size_t rem = data.size() % 8;
  for (std::size_t i = 0; i < rem; ++i) tail[i] = data[8 * full + i];
  tail[rem] = 0x80;
  absorb(load_le(tail.data()));
  absorb(static_cast<std::uint64_t>(data.size()));

  for (int i = 0; i < 4; ++i) absorb(0);

  std::array<std::uint8_t, 16> out{};
  for (int i = 0; i < 8; ++i) {
    out[i] = static_cast<std::uint8_t>(s0 >> (8 * i));
    out[8 + i] = static_cast<std::uint8_t>(s1 >> (8 * i));
  }
  return out;
}

}  // namespace btpair
