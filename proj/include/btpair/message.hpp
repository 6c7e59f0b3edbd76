#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "btpair/octets.hpp"

namespace btpair {

/// Simulated clock, integral milliseconds.
using SimTime = std::chrono::milliseconds;

enum class MessageKind { AuthRequest, ChallengeMsg, ResponseMsg, DhPublicMsg, AuthSuccess, AuthFail };

inline constexpr std::array<MessageKind, 6> kAllMessageKinds = {
    MessageKind::AuthRequest, MessageKind::ChallengeMsg, MessageKind::ResponseMsg,
    MessageKind::DhPublicMsg, MessageKind::AuthSuccess,  MessageKind::AuthFail};

inline constexpr std::string_view kind_name(MessageKind kind) {
  switch (kind) {
    case MessageKind::AuthRequest: return "AuthRequest";
    case MessageKind::ChallengeMsg: return "ChallengeMsg";
    case MessageKind::ResponseMsg: return "ResponseMsg";
    case MessageKind::DhPublicMsg: return "DhPublicMsg";
    case MessageKind::AuthSuccess: return "AuthSuccess";
    case MessageKind::AuthFail: return "AuthFail";
  }
  return "?";
}

inline std::optional<MessageKind> parse_kind(std::string_view name) {
  for (MessageKind k : kAllMessageKinds) {
    if (kind_name(k) == name) return k;
  }
  return std::nullopt;
}

/// Payload width on the wire: claimant address, challenge, SRES, 64-bit DH
/// public value (big-endian), or nothing.
inline constexpr std::size_t payload_width(MessageKind kind) {
  switch (kind) {
    case MessageKind::AuthRequest: return DeviceId::kSize;
    case MessageKind::ChallengeMsg: return Challenge::kSize;
    case MessageKind::ResponseMsg: return Sres::kSize;
    case MessageKind::DhPublicMsg: return 8;
    case MessageKind::AuthSuccess:
    case MessageKind::AuthFail: return 0;
  }
  return 0;
}

struct Message {
  MessageKind kind;
  DeviceId sender;
  DeviceId receiver;
  Bytes payload;

  /// Checks payload width and sender != receiver.
  static Message make(MessageKind kind, const DeviceId& sender, const DeviceId& receiver, Bytes payload = {}) {
    if (sender == receiver) throw std::invalid_argument("message sender equals receiver");
    if (payload.size() != payload_width(kind)) {
      throw std::invalid_argument(std::string(kind_name(kind)) + " payload must be " +
                                  std::to_string(payload_width(kind)) + " octets");
    }
    return Message{kind, sender, receiver, std::move(payload)};
  }

  bool well_formed() const { return sender != receiver && payload.size() == payload_width(kind); }

  friend bool operator==(const Message&, const Message&) = default;
};

}  // namespace btpair
