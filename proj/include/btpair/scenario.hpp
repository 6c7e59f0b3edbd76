#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "btpair/device.hpp"
#include "btpair/dh.hpp"
#include "btpair/intruder.hpp"
#include "btpair/keys.hpp"
#include "btpair/simnet.hpp"
#include "btpair/verdict.hpp"

namespace btpair {

/// Fixed addresses for the three-party topology.
inline const DeviceId kDeviceA = DeviceId::from_hex("001a7dda7101");
inline const DeviceId kDeviceB = DeviceId::from_hex("001a7dda7102");
inline const DeviceId kIntruderC = DeviceId::from_hex("00c0ffee0003");

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class InitiatorSide { A, C };

struct ScenarioConfig {
  Variant variant = Variant::Legacy;
  std::optional<IntruderMode> intruder;
  InitiatorSide initiator = InitiatorSide::A;
  std::uint64_t seed = 1;
  std::uint64_t seeds_count = 1;
  std::string pin = "0000";
  std::int64_t latency_ms = 10;
  std::int64_t timeout_ms = 2000;
  double detect_factor = 1.5;
  std::optional<std::int64_t> baseline_rtt_ms;  // defaults to two hops
  DhInt dh_p = 2147483647;                       // 2^31 - 1
  DhInt dh_alpha = 7;

  /// Throws ConfigError on an inconsistent configuration.
  void validate() const {
    if (seeds_count < 1) throw ConfigError("seeds-count must be at least 1");
    if (initiator == InitiatorSide::C && intruder != IntruderMode::OriginateToA) {
      throw ConfigError("initiator C requires intruder originate");
    }
    if (intruder == IntruderMode::OriginateToA && initiator != InitiatorSide::C) {
      throw ConfigError("intruder originate requires initiator C");
    }
    if (latency_ms <= 0) throw ConfigError("latency-ms must be positive");
    if (timeout_ms <= latency_ms) throw ConfigError("timeout-ms must exceed latency-ms");
    if (!(detect_factor > 1.0)) throw ConfigError("detect-factor must exceed 1");
    if (baseline_rtt_ms && *baseline_rtt_ms <= 0) throw ConfigError("baseline-rtt-ms must be positive");
    try {
      Pin{pin};
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    if (variant == Variant::DhImproved) dh_params();
  }

  DhParams dh_params() const {
    try {
      return DhParams(dh_p, dh_alpha);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }

  SimTime baseline_rtt() const { return SimTime{baseline_rtt_ms.value_or(2 * latency_ms)}; }

  LinkConfig links() const {
    LinkConfig l;
    l.latency = SimTime{latency_ms};
    l.timeout = SimTime{timeout_ms};
    return l;
  }

  /// e.g. "improved/relay-active/A"
  std::string name() const {
    return std::string(variant_name(variant)) + "/" +
           (intruder ? std::string(intruder_mode_name(*intruder)) : std::string("none")) + "/" +
           (initiator == InitiatorSide::A ? "A" : "C");
  }
};

/// Independent per-role seed from a run seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) {
  ByteWriter w;
  w.put(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(label.data()), label.size()));
  for (int i = 0; i < 8; ++i) w.put(static_cast<std::uint8_t>(seed >> (8 * i)));
  auto h = mixhash128(w.bytes());
  std::uint64_t out = 0;
  for (int i = 7; i >= 0; --i) out = (out << 8) | h[i];
  return out;
}

/// Bonds A and B from a shared PIN. A picks IN_RAND; both derive the
/// initialization key; each side sends its link-key contribution XORed with
/// that key and both compute the combination key. Throws if the two sides
/// disagree, which would indicate a derivation bug.
inline LinkKey pair_devices(const Pin& pin, const DeviceId& a, const DeviceId& b, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto draw = [&] {
    Challenge c;
    for (std::size_t i = 0; i < Challenge::kSize; i += 8) {
      const std::uint64_t w = rng();
      for (std::size_t j = 0; j < 8; ++j) c.octets[i + j] = static_cast<std::uint8_t>(w >> (8 * j));
    }
    return c;
  };
  const Challenge in_rand = draw();
  const InitKey kinit_a = init_key(pin, b, in_rand);
  const InitKey kinit_b = init_key(pin, b, in_rand);

  const Challenge lk_rand_a = draw();
  const Challenge lk_rand_b = draw();
  const Challenge sent_by_a = lk_rand_a ^ retag<Challenge>(kinit_a);
  const Challenge sent_by_b = lk_rand_b ^ retag<Challenge>(kinit_b);
  const Challenge a_recovers = sent_by_b ^ retag<Challenge>(kinit_a);
  const Challenge b_recovers = sent_by_a ^ retag<Challenge>(kinit_b);

  const LinkKey key_a = combination_link_key(lk_rand_a, a, a_recovers, b);
  const LinkKey key_b = combination_link_key(b_recovers, a, lk_rand_b, b);
  if (key_a != key_b) throw std::logic_error("pairing produced different link keys");
  return key_a;
}

struct ScenarioResult {
  std::uint64_t seed;
  RunResult run;
  std::map<DeviceId, Detection> detections;
  AttackVerdict verdict;
};

inline ScenarioResult run_scenario(const ScenarioConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  std::optional<DhParams> params;
  if (cfg.variant == Variant::DhImproved) params = cfg.dh_params();

  const LinkKey key = pair_devices(Pin{cfg.pin}, kDeviceA, kDeviceB, derive_seed(seed, "pair"));
  std::vector<Device> devices;
  devices.emplace_back(kDeviceA, cfg.variant, key, derive_seed(seed, "A"), params);
  devices.emplace_back(kDeviceB, cfg.variant, key, derive_seed(seed, "B"), params);

  std::optional<Intruder> intruder;
  if (cfg.intruder) intruder.emplace(kIntruderC, *cfg.intruder, kDeviceA, kDeviceB, derive_seed(seed, "C"), params);

  const DeviceId initiator = cfg.initiator == InitiatorSide::A ? kDeviceA : kIntruderC;
  const DeviceId target = cfg.initiator == InitiatorSide::A ? kDeviceB : kDeviceA;

  ScenarioResult out{seed, run(std::move(devices), std::move(intruder), cfg.links(), initiator, target), {}, {}};
  Detection any = Detection::None;
  for (const DeviceId& id : {kDeviceA, kDeviceB}) {
    const Detection d = delay_detector(out.run, cfg.baseline_rtt(), cfg.detect_factor, id);
    out.detections[id] = d;
    if (d == Detection::DelayFlagged) any = d;
  }
  out.verdict = verdict(out.run, any);
  return out;
}

inline std::string report_line(const ScenarioConfig& cfg, const ScenarioResult& r) {
  return "scenario=" + cfg.name() + " seed=" + std::to_string(r.seed) +
         " attack_success=" + (r.verdict.attack_success ? "true" : "false") +
         " integrity=" + std::string(integrity_name(r.verdict.integrity)) +
         " confidentiality=" + std::string(confidentiality_name(r.verdict.confidentiality)) +
         " detection=" + std::string(detection_name(r.verdict.detection)) +
         " messages=" + std::to_string(r.run.transcript.size());
}

}  // namespace btpair
