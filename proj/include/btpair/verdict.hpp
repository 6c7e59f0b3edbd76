#pragma once

#include <algorithm>
#include <string_view>

#include "btpair/simnet.hpp"

namespace btpair {

enum class Integrity { Maintained, Broken };
enum class Confidentiality { Maintained, Breached };

inline std::string_view integrity_name(Integrity i) { return i == Integrity::Maintained ? "maintained" : "broken"; }
inline std::string_view confidentiality_name(Confidentiality c) {
  return c == Confidentiality::Maintained ? "maintained" : "breached";
}

struct AttackVerdict {
  bool attack_success = false;
  Integrity integrity = Integrity::Maintained;
  Confidentiality confidentiality = Confidentiality::Maintained;
  Detection detection = Detection::None;
};

/// True when no frame passed directly between the two victims.
inline bool all_traffic_via(const Transcript& t, const DeviceId& a, const DeviceId& b) {
  return std::none_of(t.begin(), t.end(), [&](const TranscriptEvent& e) {
    return (e.from == a && e.to == b) || (e.from == b && e.to == a);
  });
}

/// Judges a quiescent run against the intruder's goals.
///
///  - attack_success: both victims ended MutualSuccess and every frame
///    between them went through the intruder.
///  - integrity: Broken if a victim ended MutualSuccess after consuming a
///    (kind, payload) the other victim never transmitted.
///  - confidentiality: Breached if the intruder saw, in plaintext, a
///    challenge issued by one victim together with the other victim's
///    response to it.
inline AttackVerdict verdict(const RunResult& run, Detection detection) {
  AttackVerdict v;
  v.detection = detection;
  if (!run.intruder) return v;
  const Intruder& c = *run.intruder;
  const DeviceId& a = c.victim_a();
  const DeviceId& b = c.victim_b();

  const bool both_success = run.outcome(a).status == AuthStatus::MutualSuccess &&
                            run.outcome(b).status == AuthStatus::MutualSuccess;
  v.attack_success = both_success && all_traffic_via(run.transcript, a, b);

  for (const DeviceId* victim : {&a, &b}) {
    if (run.outcome(*victim).status != AuthStatus::MutualSuccess) continue;
    const DeviceId& peer = c.other(*victim);
    for (const auto& in : run.transcript) {
      if (in.to != *victim) continue;
      const bool genuine = std::any_of(run.transcript.begin(), run.transcript.end(), [&](const TranscriptEvent& out) {
        return out.from == peer && out.kind == in.kind && out.payload == in.payload;
      });
      if (!genuine) v.integrity = Integrity::Broken;
    }
  }

  for (const DeviceId* claimant : {&a, &b}) {
    const Device& responder = run.device(*claimant);
    const Device& verifier = run.device(c.other(*claimant));
    for (const auto& ans : responder.answered_challenges()) {
      const auto& issued = verifier.issued_challenges();
      const bool honest_pair = std::find(issued.begin(), issued.end(), ans.challenge) != issued.end();
      if (honest_pair && c.knows(ans.challenge) && c.knows(ans.response)) {
        v.confidentiality = Confidentiality::Breached;
      }
    }
  }
  return v;
}

}  // namespace btpair
