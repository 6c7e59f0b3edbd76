#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>
#include <utility>

#include "btpair/mixhash.hpp"
#include "btpair/octets.hpp"

namespace btpair {

/// Domain tags for the single PRF behind every key derivation.
enum class KeyTag : std::uint8_t {
  kAuthentication = 0x01,   // E1
  kInitialization = 0x02,   // E22
  kCombination = 0x03,      // E21
  kEncryption = 0x04,       // E3
  kSession = 0x05,          // DH shared value -> session key
  kWireMask = 0x06,         // challenge/response masking under a session key
};

inline std::array<std::uint8_t, 16> tagged_hash(KeyTag tag, const ByteWriter& body) {
  Bytes data;
  data.reserve(body.bytes().size() + 1);
  data.push_back(static_cast<std::uint8_t>(tag));
  data.insert(data.end(), body.bytes().begin(), body.bytes().end());
  return mixhash128(data);
}

/// Factory or user-entered PIN, 1 to 16 octets.
class Pin {
 public:
  static constexpr std::size_t kMaxOctets = 16;

  explicit Pin(std::span<const std::uint8_t> octets) : octets_(octets.begin(), octets.end()) {
    if (octets_.empty() || octets_.size() > kMaxOctets) {
      throw std::invalid_argument("PIN must be 1 to 16 octets, got " + std::to_string(octets_.size()));
    }
  }
  explicit Pin(std::string_view text)
      : Pin(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(text.data()), text.size())) {}

  std::span<const std::uint8_t> octets() const { return octets_; }
  std::size_t size() const { return octets_.size(); }

 private:
  Bytes octets_;
};

struct AuthResult {
  Sres sres;
  Aco aco;
};

/// E1: response to `challenge` for the device `claimant` under `key`.
/// SRES is digest[0..4), ACO is digest[4..16).
inline AuthResult e1(const LinkKey& key, const Challenge& challenge, const DeviceId& claimant) {
  auto digest = tagged_hash(KeyTag::kAuthentication, ByteWriter().put(key).put(challenge).put(claimant));
  std::span<const std::uint8_t> d(digest);
  return {Sres::from_span(d.first(4)), Aco::from_span(d.subspan(4))};
}

/// E22: initialization key from PIN, PIN length, address and a random number.
inline InitKey init_key(const Pin& pin, const DeviceId& addr, const Challenge& rand) {
  return InitKey(tagged_hash(KeyTag::kInitialization,
                             ByteWriter()
                                 .put(pin.octets())
                                 .put(static_cast<std::uint8_t>(pin.size()))
                                 .put(addr)
                                 .put(rand)));
}

/// E21 per side, XOR-combined. Symmetric in the two contributions.
inline LinkKey combination_link_key(const Challenge& rand_a, const DeviceId& addr_a,
                                    const Challenge& rand_b, const DeviceId& addr_b) {
  auto a = tagged_hash(KeyTag::kCombination, ByteWriter().put(rand_a).put(addr_a));
  auto b = tagged_hash(KeyTag::kCombination, ByteWriter().put(rand_b).put(addr_b));
  LinkKey out;
  for (std::size_t i = 0; i < out.octets.size(); ++i) out.octets[i] = a[i] ^ b[i];
  return out;
}

/// E3.
inline EncryptionKey encryption_key(const LinkKey& key, const Aco& aco, const Challenge& en_rand) {
  return EncryptionKey(tagged_hash(KeyTag::kEncryption, ByteWriter().put(key).put(aco).put(en_rand)));
}

/// Re-types key material of equal width, e.g. a session key folded into a link key.
template <class To, class From>
  requires(To::kSize == From::kSize)
To retag(const From& from) {
  return To(from.octets);
}

}  // namespace btpair
