#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace btpair {

using Bytes = std::vector<std::uint8_t>;

namespace detail {

inline int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace detail

/// Lowercase hex, no separators.
inline std::string to_hex(std::span<const std::uint8_t> data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (std::uint8_t b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

inline Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw std::invalid_argument("hex string has odd length");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = detail::hex_nibble(hex[2 * i]);
    int lo = detail::hex_nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw std::invalid_argument("invalid hex digit");
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

/// Fixed-width octet string. The tag keeps e.g. a LinkKey from being passed
/// where a Challenge is expected even though both are 16 octets.
template <std::size_t N, class Tag>
struct FixedOctets {
  static constexpr std::size_t kSize = N;

  std::array<std::uint8_t, N> octets{};

  constexpr FixedOctets() = default;
  constexpr explicit FixedOctets(const std::array<std::uint8_t, N>& o) : octets(o) {}

  static FixedOctets from_span(std::span<const std::uint8_t> data) {
    if (data.size() != N) {
      throw std::invalid_argument("expected " + std::to_string(N) + " octets, got " +
                                  std::to_string(data.size()));
    }
    FixedOctets out;
    std::copy(data.begin(), data.end(), out.octets.begin());
    return out;
  }

  static FixedOctets from_hex(std::string_view hex) { return from_span(btpair::from_hex(hex)); }

  std::span<const std::uint8_t, N> span() const { return octets; }
  Bytes bytes() const { return Bytes(octets.begin(), octets.end()); }
  std::string hex() const { return to_hex(octets); }

  friend constexpr auto operator<=>(const FixedOctets&, const FixedOctets&) = default;
};

template <std::size_t N, class Tag>
FixedOctets<N, Tag> operator^(const FixedOctets<N, Tag>& a, const FixedOctets<N, Tag>& b) {
  FixedOctets<N, Tag> out;
  for (std::size_t i = 0; i < N; ++i) out.octets[i] = a.octets[i] ^ b.octets[i];
  return out;
}

using DeviceId = FixedOctets<6, struct DeviceIdTag>;
using Challenge = FixedOctets<16, struct ChallengeTag>;
using Sres = FixedOctets<4, struct SresTag>;
using Aco = FixedOctets<12, struct AcoTag>;
using LinkKey = FixedOctets<16, struct LinkKeyTag>;
using InitKey = FixedOctets<16, struct InitKeyTag>;
using SessionKey = FixedOctets<16, struct SessionKeyTag>;
using EncryptionKey = FixedOctets<16, struct EncryptionKeyTag>;

/// Concatenates octet strings.
class ByteWriter {
 public:
  ByteWriter& put(std::uint8_t b) {
    buf_.push_back(b);
    return *this;
  }
  ByteWriter& put(std::span<const std::uint8_t> data) {
    buf_.insert(buf_.end(), data.begin(), data.end());
    return *this;
  }
  template <std::size_t N, class Tag>
  ByteWriter& put(const FixedOctets<N, Tag>& v) {
    return put(std::span<const std::uint8_t>(v.octets));
  }
  /// Big-endian, zero-extended to `width` octets.
  ByteWriter& put_be(std::uint64_t v, std::size_t width) {
    for (std::size_t i = width; i-- > 0;) buf_.push_back(i < 8 ? static_cast<std::uint8_t>(v >> (8 * i)) : 0);
    return *this;
  }

  const Bytes& bytes() const { return buf_; }
  Bytes take() { return std::move(buf_); }

 private:
  Bytes buf_;
};

inline std::uint64_t read_be(std::span<const std::uint8_t> data) {
  if (data.size() > 8) {
    for (std::size_t i = 0; i + 8 < data.size(); ++i) {
      if (data[i] != 0) throw std::out_of_range("big-endian value exceeds 64 bits");
    }
    data = data.subspan(data.size() - 8);
  }
  std::uint64_t v = 0;
  for (std::uint8_t b : data) v = (v << 8) | b;
  return v;
}

}  // namespace btpair
