#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "btpair/dh.hpp"
#include "btpair/keys.hpp"
#include "btpair/message.hpp"
#include "btpair/octets.hpp"

namespace btpair {

enum class Variant { Legacy, Improved, DhImproved };
enum class Role { Initiator, Responder };

enum class Phase {
  Idle,
  AwaitPeerPublic,
  AwaitPeerChallenge,
  AwaitPeerResponse,
  AwaitConfirmation,
  Authenticated,
  Failed,
};

enum class FailReason { SresMismatch, PeerRejected, ProtocolViolation };

inline std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::Legacy: return "legacy";
    case Variant::Improved: return "improved";
    case Variant::DhImproved: return "dh-improved";
  }
  return "?";
}

inline std::string_view phase_name(Phase p) {
  switch (p) {
    case Phase::Idle: return "Idle";
    case Phase::AwaitPeerPublic: return "AwaitPeerPublic";
    case Phase::AwaitPeerChallenge: return "AwaitPeerChallenge";
    case Phase::AwaitPeerResponse: return "AwaitPeerResponse";
    case Phase::AwaitConfirmation: return "AwaitConfirmation";
    case Phase::Authenticated: return "Authenticated";
    case Phase::Failed: return "Failed";
  }
  return "?";
}

/// Raised on API misuse (e.g. starting a device twice). Malformed traffic
/// from a peer is not an exception; it fails the session with AuthFail.
class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct RttSample {
  Challenge challenge;
  SimTime sent;
  SimTime received;
};

/// A challenge this device answered, in plaintext.
struct AnsweredChallenge {
  Challenge challenge;
  Sres response;
};

/// One endpoint of a pairing. Drives the legacy mutual challenge-response,
/// the nested (improved) ordering, or the nested ordering over a DH-derived
/// session key, depending on `variant`.
///
/// Single-owner: mutate from one event loop only.
class Device {
 public:
  Device(const DeviceId& id, Variant variant, const LinkKey& link_key, std::uint64_t seed,
         std::optional<DhParams> dh_params = std::nullopt)
      : id_(id), variant_(variant), link_key_(link_key), dh_params_(dh_params), rng_(seed) {
    if (variant_ == Variant::DhImproved && !dh_params_) {
      throw std::invalid_argument("dh-improved device requires DH parameters");
    }
  }

  /// Opens authentication toward `peer` as initiator.
  std::vector<Message> start(const DeviceId& peer, SimTime now) {
    if (phase_ != Phase::Idle) throw ProtocolError("start called on a device that is not idle");
    if (peer == id_) throw std::invalid_argument("device cannot authenticate itself");
    role_ = Role::Initiator;
    peer_ = peer;

    std::vector<Message> out;
    out.push_back(Message::make(MessageKind::AuthRequest, id_, peer, id_.bytes()));
    if (variant_ == Variant::DhImproved) {
      out.push_back(send_public());
      phase_ = Phase::AwaitPeerPublic;
      return out;
    }
    out.push_back(send_challenge(now));
    phase_ = variant_ == Variant::Legacy ? Phase::AwaitPeerResponse : Phase::AwaitPeerChallenge;
    return out;
  }

  /// Consumes one message addressed to this device and returns the replies.
  std::vector<Message> handle(const Message& msg, SimTime now) {
    if (msg.receiver != id_) throw std::invalid_argument("message not addressed to this device");
    if (terminal()) return {};
    if (!msg.well_formed()) return fail(FailReason::ProtocolViolation, msg.sender);
    if (msg.kind == MessageKind::AuthFail) {
      phase_ = Phase::Failed;
      fail_reason_ = FailReason::PeerRejected;
      finish_session();
      return {};
    }
    if (peer_ && msg.sender != *peer_) return fail(FailReason::ProtocolViolation, msg.sender);

    switch (phase_) {
      case Phase::Idle: return on_idle(msg);
      case Phase::AwaitPeerPublic: return on_await_public(msg, now);
      case Phase::AwaitPeerChallenge: return on_await_challenge(msg, now);
      case Phase::AwaitPeerResponse: return on_await_response(msg, now);
      case Phase::AwaitConfirmation: return on_await_confirmation(msg);
      case Phase::Authenticated:
      case Phase::Failed: break;
    }
    return {};
  }

  /// Largest observed challenge-to-response delay, if any pair completed.
  std::optional<SimTime> rtt_estimate() const {
    if (rtt_samples_.empty()) return std::nullopt;
    SimTime best{0};
    for (const auto& s : rtt_samples_) best = std::max(best, s.received - s.sent);
    return best;
  }

  /// Drops the session key. Ephemeral DH secrets are already gone once the
  /// session reached a terminal phase.
  void end_session() { session_.reset(); }

  const DeviceId& id() const { return id_; }
  Variant variant() const { return variant_; }
  std::optional<Role> role() const { return role_; }
  Phase phase() const { return phase_; }
  bool terminal() const { return phase_ == Phase::Authenticated || phase_ == Phase::Failed; }
  bool peer_authenticated() const { return peer_authenticated_; }
  std::optional<FailReason> fail_reason() const { return fail_reason_; }
  const std::optional<DeviceId>& peer() const { return peer_; }
  const LinkKey& link_key() const { return link_key_; }
  const std::optional<DhParams>& dh_params() const { return dh_params_; }
  const std::optional<DhKeyPair>& dh() const { return dh_; }
  const std::optional<DhInt>& own_public() const { return own_public_; }
  const std::optional<DhInt>& shared_secret() const { return shared_; }
  const std::optional<SessionKey>& session() const { return session_; }
  const std::optional<EncryptionKey>& encryption_key() const { return encryption_key_; }
  const std::optional<Challenge>& pending_challenge_sent() const { return pending_sent_; }
  const std::optional<Challenge>& pending_challenge_received() const { return pending_received_; }
  const std::vector<RttSample>& rtt_samples() const { return rtt_samples_; }
  const std::vector<Challenge>& issued_challenges() const { return issued_; }
  const std::vector<AnsweredChallenge>& answered_challenges() const { return answered_; }

  /// SRES key: the link key, XORed with the session key under DH.
  LinkKey auth_key() const {
    if (variant_ == Variant::DhImproved && session_) return link_key_ ^ retag<LinkKey>(*session_);
    return link_key_;
  }

 private:
  std::vector<Message> on_idle(const Message& msg) {
    if (msg.kind != MessageKind::AuthRequest) return fail(FailReason::ProtocolViolation, msg.sender);
    role_ = Role::Responder;
    peer_ = DeviceId::from_span(msg.payload);
    if (*peer_ != msg.sender || *peer_ == id_) return fail(FailReason::ProtocolViolation, msg.sender);
    phase_ = variant_ == Variant::DhImproved ? Phase::AwaitPeerPublic : Phase::AwaitPeerChallenge;
    return {};
  }

  std::vector<Message> on_await_public(const Message& msg, SimTime now) {
    if (msg.kind != MessageKind::DhPublicMsg) return fail(FailReason::ProtocolViolation, msg.sender);
    const DhInt peer_public = read_be(msg.payload);
    if (peer_public < 1 || peer_public > dh_params_->p() - 1) {
      return fail(FailReason::ProtocolViolation, msg.sender);
    }
    std::vector<Message> out;
    if (*role_ == Role::Responder) out.push_back(send_public());
    shared_ = dh_shared(*dh_params_, peer_public, dh_->r_private);
    session_ = session_key_from_shared(*shared_, *dh_params_);
    if (*role_ == Role::Initiator) out.push_back(send_challenge(now));
    phase_ = Phase::AwaitPeerChallenge;
    return out;
  }

  std::vector<Message> on_await_challenge(const Message& msg, SimTime now) {
    if (msg.kind != MessageKind::ChallengeMsg) return fail(FailReason::ProtocolViolation, msg.sender);
    const Challenge challenge = unmask_challenge(msg);
    std::vector<Message> out;

    if (variant_ == Variant::Legacy) {
      out.push_back(send_response(challenge));
      if (*role_ == Role::Initiator) {
        phase_ = Phase::AwaitConfirmation;
      } else {
        out.push_back(send_challenge(now));
        phase_ = Phase::AwaitPeerResponse;
      }
      return out;
    }

    if (*role_ == Role::Initiator) {
      // Initiator answers first. The peer's reply to our challenge now
      // depends on this response, so its delay is timed from here.
      out.push_back(send_response(challenge));
      restart_pending_timer(now);
    } else {
      // Withhold our response until the initiator has answered ours.
      pending_received_ = challenge;
      out.push_back(send_challenge(now));
    }
    phase_ = Phase::AwaitPeerResponse;
    return out;
  }

  std::vector<Message> on_await_response(const Message& msg, SimTime now) {
    if (msg.kind != MessageKind::ResponseMsg) return fail(FailReason::ProtocolViolation, msg.sender);
    const Challenge challenge = *pending_sent_;
    rtt_samples_.push_back({challenge, pending_sent_time_, now});
    pending_sent_.reset();

    const Sres received = unmask_response(msg);
    const AuthResult expected = e1(auth_key(), challenge, *peer_);
    if (received != expected.sres) return fail(FailReason::SresMismatch, msg.sender);
    peer_authenticated_ = true;
    if (*role_ == Role::Initiator) initiator_aco_ = expected.aco;

    std::vector<Message> out;
    const bool initiator = *role_ == Role::Initiator;
    if (variant_ == Variant::Legacy) {
      if (initiator) {
        phase_ = Phase::AwaitPeerChallenge;
      } else {
        out.push_back(Message::make(MessageKind::AuthSuccess, id_, *peer_));
        complete();
      }
      return out;
    }
    if (initiator) {
      out.push_back(Message::make(MessageKind::AuthSuccess, id_, *peer_));
      complete();
    } else {
      out.push_back(send_response(*pending_received_));
      pending_received_.reset();
      phase_ = Phase::AwaitConfirmation;
    }
    return out;
  }

  std::vector<Message> on_await_confirmation(const Message& msg) {
    if (msg.kind != MessageKind::AuthSuccess) return fail(FailReason::ProtocolViolation, msg.sender);
    complete();
    return {};
  }

  Message send_challenge(SimTime now) {
    Challenge c;
    for (std::size_t i = 0; i < Challenge::kSize; i += 8) {
      const std::uint64_t word = rng_();
      for (std::size_t j = 0; j < 8; ++j) c.octets[i + j] = static_cast<std::uint8_t>(word >> (8 * j));
    }
    pending_sent_ = c;
    pending_sent_time_ = now;
    issued_.push_back(c);
    if (*role_ == Role::Initiator) initiator_challenge_ = c;
    else responder_challenge_ = c;
    return Message::make(MessageKind::ChallengeMsg, id_, *peer_, mask(c, id_, MessageKind::ChallengeMsg));
  }

  Message send_response(const Challenge& challenge) {
    const AuthResult r = e1(auth_key(), challenge, id_);
    answered_.push_back({challenge, r.sres});
    if (*role_ == Role::Initiator) {
      responder_challenge_ = challenge;
    } else {
      initiator_challenge_ = challenge;
      initiator_aco_ = r.aco;
    }
    return Message::make(MessageKind::ResponseMsg, id_, *peer_, mask(r.sres, id_, MessageKind::ResponseMsg));
  }

  Message send_public() {
    const DhInt r = 1 + rng_() % (dh_params_->p() - 1);
    dh_ = dh_keypair(*dh_params_, r);
    own_public_ = dh_->s_public;
    return Message::make(MessageKind::DhPublicMsg, id_, *peer_, ByteWriter().put_be(dh_->s_public, 8).take());
  }

  void restart_pending_timer(SimTime now) {
    if (pending_sent_) pending_sent_time_ = now;
  }

  // Under DH, challenges and responses travel masked by a keystream derived
  // from the session key and the sending address; otherwise in plaintext.
  template <std::size_t N, class Tag>
  Bytes mask(const FixedOctets<N, Tag>& value, const DeviceId& sender, MessageKind kind) const {
    Bytes out = value.bytes();
    if (variant_ != Variant::DhImproved) return out;
    auto pad = tagged_hash(KeyTag::kWireMask,
                           ByteWriter().put(*session_).put(sender).put(static_cast<std::uint8_t>(kind)));
    for (std::size_t i = 0; i < N; ++i) out[i] ^= pad[i];
    return out;
  }

  Challenge unmask_challenge(const Message& msg) const {
    return Challenge::from_span(mask(Challenge::from_span(msg.payload), msg.sender, msg.kind));
  }
  Sres unmask_response(const Message& msg) const {
    return Sres::from_span(mask(Sres::from_span(msg.payload), msg.sender, msg.kind));
  }

  std::vector<Message> fail(FailReason reason, const DeviceId& to) {
    phase_ = Phase::Failed;
    fail_reason_ = reason;
    finish_session();
    if (to == id_) return {};
    return {Message::make(MessageKind::AuthFail, id_, to)};
  }

  void complete() {
    phase_ = Phase::Authenticated;
    if (initiator_challenge_ && responder_challenge_ && initiator_aco_) {
      encryption_key_ = btpair::encryption_key(auth_key(), *initiator_aco_,
                                               *initiator_challenge_ ^ *responder_challenge_);
    }
    finish_session();
  }

  // Private exponent and raw shared value do not outlive the exchange.
  void finish_session() {
    dh_.reset();
    shared_.reset();
  }

  DeviceId id_;
  Variant variant_;
  LinkKey link_key_;
  std::optional<DhParams> dh_params_;
  std::mt19937_64 rng_;

  std::optional<Role> role_;
  Phase phase_ = Phase::Idle;
  std::optional<DeviceId> peer_;
  std::optional<Challenge> pending_sent_;
  SimTime pending_sent_time_{0};
  std::optional<Challenge> pending_received_;
  bool peer_authenticated_ = false;
  std::optional<FailReason> fail_reason_;

  std::optional<DhKeyPair> dh_;
  std::optional<DhInt> own_public_;
  std::optional<DhInt> shared_;
  std::optional<SessionKey> session_;

  std::optional<Challenge> initiator_challenge_;
  std::optional<Challenge> responder_challenge_;
  std::optional<Aco> initiator_aco_;
  std::optional<EncryptionKey> encryption_key_;

  std::vector<RttSample> rtt_samples_;
  std::vector<Challenge> issued_;
  std::vector<AnsweredChallenge> answered_;
};

}  // namespace btpair
