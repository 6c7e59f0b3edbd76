#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "btpair/dh.hpp"
#include "btpair/message.hpp"
#include "btpair/octets.hpp"

namespace btpair {

enum class IntruderMode {
  RelayActive,   // impersonate each victim to the other; substitutes DH publics
  RelayPassive,  // forward unchanged, record everything
  OriginateToA,  // open a session toward A posing as B
};

inline std::string_view intruder_mode_name(IntruderMode m) {
  switch (m) {
    case IntruderMode::RelayActive: return "relay-active";
    case IntruderMode::RelayPassive: return "relay-passive";
    case IntruderMode::OriginateToA: return "originate";
  }
  return "?";
}

/// Something the intruder put on the air, with the size of its knowledge
/// just before sending.
struct Emission {
  Message message;
  std::size_t knowledge_size;
};

/// Intruder C sitting between victims A and B. It holds no link key; all it
/// can do is forward, substitute what it can compute (its own DH public) and
/// originate fresh challenges.
class Intruder {
 public:
  Intruder(const DeviceId& id, IntruderMode mode, const DeviceId& victim_a, const DeviceId& victim_b,
           std::uint64_t seed, std::optional<DhParams> dh_params = std::nullopt)
      : id_(id), mode_(mode), victim_a_(victim_a), victim_b_(victim_b), dh_params_(dh_params), rng_(seed) {
    if (victim_a == victim_b || id == victim_a || id == victim_b) {
      throw std::invalid_argument("intruder and victims need distinct addresses");
    }
    impersonating_[victim_a_] = victim_b_;
    impersonating_[victim_b_] = victim_a_;
  }

  /// OriginateToA only: AuthRequest and a fresh challenge to A, sent as B.
  std::vector<Message> start(SimTime /*now*/) {
    if (mode_ != IntruderMode::OriginateToA) throw std::logic_error("only an originating intruder starts a session");
    if (started_) throw std::logic_error("intruder already started");
    started_ = true;
    Challenge r1;
    for (std::size_t i = 0; i < Challenge::kSize; i += 8) {
      const std::uint64_t word = rng_();
      for (std::size_t j = 0; j < 8; ++j) r1.octets[i + j] = static_cast<std::uint8_t>(word >> (8 * j));
    }
    std::vector<Message> out;
    out.push_back(Message::make(MessageKind::AuthRequest, victim_b_, victim_a_, victim_b_.bytes()));
    out.push_back(Message::make(MessageKind::ChallengeMsg, victim_b_, victim_a_, r1.bytes()));
    return emit(std::move(out));
  }

  /// Handles a frame captured from a victim and returns what C transmits.
  std::vector<Message> intercept(const Message& msg, SimTime /*now*/) {
    if (!msg.well_formed() || !is_victim(msg.sender)) return {};
    learn(msg.payload);
    const DeviceId& from = msg.sender;
    const DeviceId to = other(from);

    switch (mode_) {
      case IntruderMode::RelayPassive: return emit({msg});
      case IntruderMode::RelayActive: {
        Message fwd = Message::make(msg.kind, impersonating_.at(to), to, msg.payload);
        if (msg.kind == MessageKind::DhPublicMsg && dh_params_) fwd.payload = own_public_bytes();
        return emit({std::move(fwd)});
      }
      case IntruderMode::OriginateToA: return originate_step(msg);
    }
    return {};
  }

  const DeviceId& id() const { return id_; }
  IntruderMode mode() const { return mode_; }
  const DeviceId& victim_a() const { return victim_a_; }
  const DeviceId& victim_b() const { return victim_b_; }
  const std::map<DeviceId, DeviceId>& impersonating() const { return impersonating_; }
  const std::optional<DhKeyPair>& dh_own() const { return dh_own_; }
  bool is_victim(const DeviceId& d) const { return d == victim_a_ || d == victim_b_; }
  const DeviceId& other(const DeviceId& victim) const { return victim == victim_a_ ? victim_b_ : victim_a_; }

  /// Distinct observed payloads in first-seen order.
  const std::vector<Bytes>& knowledge() const { return knowledge_order_; }
  bool knows(const Bytes& payload) const { return knowledge_.contains(payload); }
  template <std::size_t N, class Tag>
  bool knows(const FixedOctets<N, Tag>& v) const {
    return knows(v.bytes());
  }
  const std::vector<Emission>& emissions() const { return emissions_; }

 private:
  // A answered our challenge with one of its own. Take that challenge
  // to B posing as A. B will only counter with another challenge, which C
  // cannot answer, and the whole chain stalls.
  std::vector<Message> originate_step(const Message& msg) {
    std::vector<Message> out;
    if (msg.sender == victim_a_ && msg.kind == MessageKind::ChallengeMsg && !opened_b_) {
      opened_b_ = true;
      out.push_back(Message::make(MessageKind::AuthRequest, victim_a_, victim_b_, victim_a_.bytes()));
      out.push_back(Message::make(MessageKind::ChallengeMsg, victim_a_, victim_b_, msg.payload));
    } else if (msg.sender == victim_b_ && msg.kind == MessageKind::ResponseMsg) {
      // B answered A's challenge; hand it back to A.
      out.push_back(Message::make(MessageKind::ResponseMsg, victim_b_, victim_a_, msg.payload));
    }
    return emit(std::move(out));
  }

  Bytes own_public_bytes() {
    if (!dh_own_) {
      const DhInt r = 1 + rng_() % (dh_params_->p() - 1);
      dh_own_ = dh_keypair(*dh_params_, r);
    }
    Bytes b = ByteWriter().put_be(dh_own_->s_public, 8).take();
    learn(b);
    return b;
  }

  void learn(const Bytes& payload) {
    if (payload.empty()) return;
    if (knowledge_.insert(payload).second) knowledge_order_.push_back(payload);
  }

  std::vector<Message> emit(std::vector<Message> msgs) {
    for (const auto& m : msgs) {
      emissions_.push_back({m, knowledge_order_.size()});
      learn(m.payload);
    }
    return msgs;
  }

  DeviceId id_;
  IntruderMode mode_;
  DeviceId victim_a_;
  DeviceId victim_b_;
  std::optional<DhParams> dh_params_;
  std::mt19937_64 rng_;
  std::map<DeviceId, DeviceId> impersonating_;
  std::optional<DhKeyPair> dh_own_;
  std::set<Bytes> knowledge_;
  std::vector<Bytes> knowledge_order_;
  std::vector<Emission> emissions_;
  bool started_ = false;
  bool opened_b_ = false;
};

struct DlogResult {
  DhInt r;
  std::uint64_t iterations;
};

/// Recovers r with alpha^r = s_public by scanning r = 1, 2, ... Desk-scale only.
inline DlogResult dlog_bruteforce(const DhParams& params, DhInt s_public) {
  DhInt acc = 1;
  for (DhInt r = 1; r <= params.p() - 1; ++r) {
    acc = mulmod(acc, params.alpha(), params.p());
    if (acc == s_public) return {r, r};
  }
  throw std::invalid_argument("value is not a power of the generator");
}

}  // namespace btpair
