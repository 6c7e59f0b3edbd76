#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <queue>
#include <tuple>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "btpair/device.hpp"
#include "btpair/intruder.hpp"
#include "btpair/message.hpp"

namespace btpair {

/// Per-ordered-pair one-way latency with a default, and the run timeout.
struct LinkConfig {
  SimTime latency{10};
  SimTime timeout{2000};
  std::map<std::pair<DeviceId, DeviceId>, SimTime> per_pair;

  SimTime latency_between(const DeviceId& from, const DeviceId& to) const {
    auto it = per_pair.find({from, to});
    return it == per_pair.end() ? latency : it->second;
  }

  void validate() const {
    SimTime worst = latency;
    if (latency <= SimTime{0}) throw std::invalid_argument("link latency must be positive");
    for (const auto& [pair, l] : per_pair) {
      if (l <= SimTime{0}) throw std::invalid_argument("link latency must be positive");
      worst = std::max(worst, l);
    }
    if (timeout <= worst) throw std::invalid_argument("timeout must exceed the largest link latency");
  }
};

/// One delivered frame. `from`/`to` are the radios that actually transmitted
/// and received it, so a relayed message shows up twice, once per hop.
struct TranscriptEvent {
  std::uint64_t seq;
  SimTime time;
  DeviceId from;
  DeviceId to;
  MessageKind kind;
  Bytes payload;

  friend bool operator==(const TranscriptEvent&, const TranscriptEvent&) = default;
};

using Transcript = std::vector<TranscriptEvent>;

enum class TranscriptFormat { Text, JsonLines };

inline std::string format_event_text(const TranscriptEvent& e) {
  return "seq=" + std::to_string(e.seq) + " t=" + std::to_string(e.time.count()) + " from=" + e.from.hex() +
         " to=" + e.to.hex() + " kind=" + std::string(kind_name(e.kind)) + " payload=" + to_hex(e.payload);
}

inline std::string format_event_json(const TranscriptEvent& e) {
  nlohmann::ordered_json j;
  j["seq"] = e.seq;
  j["t"] = e.time.count();
  j["from"] = e.from.hex();
  j["to"] = e.to.hex();
  j["kind"] = kind_name(e.kind);
  j["payload"] = to_hex(e.payload);
  return j.dump();
}

inline void write_transcript(std::ostream& os, const Transcript& transcript, TranscriptFormat format) {
  for (const auto& e : transcript) {
    os << (format == TranscriptFormat::Text ? format_event_text(e) : format_event_json(e)) << '\n';
  }
}

enum class AuthStatus { MutualSuccess, Failed, TimedOut };

inline std::string_view status_name(AuthStatus s) {
  switch (s) {
    case AuthStatus::MutualSuccess: return "MutualSuccess";
    case AuthStatus::Failed: return "Failed";
    case AuthStatus::TimedOut: return "TimedOut";
  }
  return "?";
}

struct AuthOutcome {
  AuthStatus status;
  std::size_t messages_exchanged;
  std::optional<DeviceId> authenticated_with;
};

struct RunResult {
  Transcript transcript;
  std::map<DeviceId, AuthOutcome> outcomes;
  std::vector<Device> devices;
  std::optional<Intruder> intruder;
  SimTime end_time{0};

  const Device& device(const DeviceId& id) const {
    for (const auto& d : devices) {
      if (d.id() == id) return d;
    }
    throw std::invalid_argument("unknown device " + id.hex());
  }
  const AuthOutcome& outcome(const DeviceId& id) const { return outcomes.at(id); }
};

namespace detail {

struct InFlight {
  SimTime time;
  std::uint64_t order;
  DeviceId from;
  DeviceId to;
  Message msg;
};

struct LaterFirst {
  bool operator()(const InFlight& a, const InFlight& b) const {
    return std::tie(a.time, a.order) > std::tie(b.time, b.order);
  }
};

}  // namespace detail

/// Runs one authentication to quiescence or timeout.
///
/// `initiator` is a device, or the intruder's address when it originates.
/// With an intruder present every frame a victim transmits lands at the
/// intruder (topology A - C - B). Events are delivered in (time, enqueue
/// order); honest devices and the intruder add no processing delay.
inline RunResult run(std::vector<Device> devices, std::optional<Intruder> intruder, const LinkConfig& links,
                     const DeviceId& initiator, const DeviceId& target) {
  links.validate();
  RunResult result;
  result.devices = std::move(devices);
  result.intruder = std::move(intruder);
  auto& devs = result.devices;
  auto& c = result.intruder;

  auto find_device = [&](const DeviceId& id) -> Device* {
    for (auto& d : devs) {
      if (d.id() == id) return &d;
    }
    return nullptr;
  };
  for (std::size_t i = 0; i < devs.size(); ++i) {
    for (std::size_t j = i + 1; j < devs.size(); ++j) {
      if (devs[i].id() == devs[j].id()) throw std::invalid_argument("duplicate device " + devs[i].id().hex());
    }
  }
  if (c) {
    if (!find_device(c->victim_a()) || !find_device(c->victim_b())) {
      throw std::invalid_argument("intruder victims must be registered devices");
    }
    if (find_device(c->id())) throw std::invalid_argument("intruder address collides with a device");
  }
  const bool intruder_starts = c && initiator == c->id();
  if (!intruder_starts && !find_device(initiator)) throw std::invalid_argument("unregistered initiator " + initiator.hex());
  if (!find_device(target)) throw std::invalid_argument("unregistered target " + target.hex());

  std::priority_queue<detail::InFlight, std::vector<detail::InFlight>, detail::LaterFirst> queue;
  std::uint64_t order = 0;

  auto transmit = [&](const DeviceId& from, std::vector<Message> msgs, SimTime now) {
    for (auto& m : msgs) {
      DeviceId to = m.receiver;
      if (c && from != c->id() && c->is_victim(from)) to = c->id();
      if (!find_device(to) && !(c && to == c->id())) continue;  // nobody listening
      queue.push({now + links.latency_between(from, to), order++, from, to, std::move(m)});
    }
  };

  if (intruder_starts) {
    transmit(c->id(), c->start(SimTime{0}), SimTime{0});
  } else {
    transmit(initiator, find_device(initiator)->start(target, SimTime{0}), SimTime{0});
  }

  while (!queue.empty()) {
    detail::InFlight ev = queue.top();
    if (ev.time > links.timeout) break;
    queue.pop();
    result.transcript.push_back({result.transcript.size(), ev.time, ev.from, ev.to, ev.msg.kind, ev.msg.payload});
    result.end_time = ev.time;
    if (c && ev.to == c->id()) {
      transmit(c->id(), c->intercept(ev.msg, ev.time), ev.time);
    } else {
      Device* d = find_device(ev.to);
      transmit(ev.to, d->handle(ev.msg, ev.time), ev.time);
    }
  }

  bool timed_out = false;
  for (const auto& d : devs) {
    AuthOutcome o{AuthStatus::TimedOut, 0, std::nullopt};
    if (d.phase() == Phase::Authenticated && d.peer_authenticated()) {
      o.status = AuthStatus::MutualSuccess;
      o.authenticated_with = d.peer();
    } else if (d.phase() == Phase::Failed) {
      o.status = AuthStatus::Failed;
    } else {
      timed_out = true;
    }
    o.messages_exchanged = static_cast<std::size_t>(std::count_if(
        result.transcript.begin(), result.transcript.end(),
        [&](const TranscriptEvent& e) { return e.from == d.id() || e.to == d.id(); }));
    result.outcomes.emplace(d.id(), o);
  }
  if (timed_out) result.end_time = links.timeout;
  return result;
}

enum class Detection { None, DelayFlagged };

inline std::string_view detection_name(Detection d) { return d == Detection::None ? "none" : "delay-flagged"; }

/// Flags `device` when its slowest challenge round trip exceeds
/// threshold_factor * baseline_rtt.
inline Detection delay_detector(const RunResult& run, SimTime baseline_rtt, double threshold_factor,
                                const DeviceId& device) {
  if (baseline_rtt <= SimTime{0}) throw std::invalid_argument("baseline rtt must be positive");
  if (!(threshold_factor > 1.0)) throw std::invalid_argument("threshold factor must exceed 1");
  const auto rtt = run.device(device).rtt_estimate();
  if (!rtt) return Detection::None;
  const double limit = threshold_factor * static_cast<double>(baseline_rtt.count());
  return static_cast<double>(rtt->count()) > limit ? Detection::DelayFlagged : Detection::None;
}

}  // namespace btpair
