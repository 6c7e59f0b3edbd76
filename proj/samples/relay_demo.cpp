// Drives the relay intruder against the legacy scheme by hand, without the
// scenario runner, and prints what each side ended up believing.

#include <iostream>

#include "btpair/btpair.hpp"

int main() {
  using namespace btpair;

  const LinkKey key = pair_devices(Pin{"0000"}, kDeviceA, kDeviceB, 42);
  std::vector<Device> devices;
  devices.emplace_back(kDeviceA, Variant::Legacy, key, 1);
  devices.emplace_back(kDeviceB, Variant::Legacy, key, 2);
  Intruder c(kIntruderC, IntruderMode::RelayActive, kDeviceA, kDeviceB, 3);

  LinkConfig links;
  const RunResult run = btpair::run(std::move(devices), std::move(c), links, kDeviceA, kDeviceB);
  write_transcript(std::cout, run.transcript, TranscriptFormat::Text);

  for (const DeviceId& id : {kDeviceA, kDeviceB}) {
    const auto& o = run.outcome(id);
    std::cout << id.hex() << ": " << status_name(o.status) << ", rtt "
              << run.device(id).rtt_estimate().value_or(SimTime{0}).count() << " ms\n";
  }
  const AttackVerdict v = verdict(run, Detection::None);
  std::cout << "attack_success=" << std::boolalpha << v.attack_success
            << " confidentiality=" << confidentiality_name(v.confidentiality) << "\n";
  std::cout << "intruder saw " << run.intruder->knowledge().size() << " distinct payloads\n";
}
