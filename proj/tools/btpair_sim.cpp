// btpair-sim: run pairing/authentication scenarios and print attack reports.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "btpair/btpair.hpp"

namespace {

constexpr int kConfigError = 2;

const std::map<std::string, btpair::Variant> kVariants = {
    {"legacy", btpair::Variant::Legacy},
    {"improved", btpair::Variant::Improved},
    {"dh-improved", btpair::Variant::DhImproved},
};

const std::map<std::string, std::optional<btpair::IntruderMode>> kIntruders = {
    {"none", std::nullopt},
    {"relay-active", btpair::IntruderMode::RelayActive},
    {"relay-passive", btpair::IntruderMode::RelayPassive},
    {"originate", btpair::IntruderMode::OriginateToA},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bluetooth-style pairing simulator with a relay intruder"};

  std::string variant = "legacy";
  std::string intruder = "none";
  std::string initiator = "A";
  std::string output = "text";
  std::string out_path;
  bool show_transcript = false;
  std::int64_t baseline = 0;
  btpair::ScenarioConfig cfg;

  app.add_option("--variant", variant, "legacy | improved | dh-improved")
      ->check(CLI::IsMember({"legacy", "improved", "dh-improved"}));
  app.add_option("--intruder", intruder, "none | relay-active | relay-passive | originate")
      ->check(CLI::IsMember({"none", "relay-active", "relay-passive", "originate"}));
  app.add_option("--initiator", initiator, "A | C (C requires --intruder originate)")
      ->check(CLI::IsMember({"A", "C"}));
  app.add_option("--seed", cfg.seed, "first seed");
  app.add_option("--seeds-count", cfg.seeds_count, "number of consecutive seeds");
  app.add_option("--pin", cfg.pin, "pairing PIN, 1 to 16 octets");
  app.add_option("--latency-ms", cfg.latency_ms, "one-hop latency");
  app.add_option("--timeout-ms", cfg.timeout_ms, "simulation timeout");
  app.add_option("--detect-factor", cfg.detect_factor, "delay detector threshold factor (> 1)");
  app.add_option("--baseline-rtt-ms", baseline, "expected direct round trip (default 2 x latency)");
  app.add_option("--dh-p", cfg.dh_p, "DH prime (dh-improved)");
  app.add_option("--dh-alpha", cfg.dh_alpha, "DH primitive root (dh-improved)");
  app.add_option("--output", output, "transcript format: text | jsonl")->check(CLI::IsMember({"text", "jsonl"}));
  app.add_flag("--transcript", show_transcript, "print each run's transcript before its report line");
  app.add_option("--out", out_path, "write transcripts to this file instead of standard output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  cfg.variant = kVariants.at(variant);
  cfg.intruder = kIntruders.at(intruder);
  cfg.initiator = initiator == "C" ? btpair::InitiatorSide::C : btpair::InitiatorSide::A;
  if (baseline != 0) cfg.baseline_rtt_ms = baseline;
  const auto format = output == "jsonl" ? btpair::TranscriptFormat::JsonLines : btpair::TranscriptFormat::Text;

  try {
    cfg.validate();
  } catch (const btpair::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }

  std::unique_ptr<std::ofstream> file;
  if (!out_path.empty()) {
    file = std::make_unique<std::ofstream>(out_path, std::ios::binary);
    if (!*file) {
      std::cerr << "error: cannot open " << out_path << "\n";
      return kConfigError;
    }
  }
  std::ostream* transcript_os = file ? static_cast<std::ostream*>(file.get()) : (show_transcript ? &std::cout : nullptr);

  for (std::uint64_t i = 0; i < cfg.seeds_count; ++i) {
    const auto result = btpair::run_scenario(cfg, cfg.seed + i);
    if (transcript_os) btpair::write_transcript(*transcript_os, result.run.transcript, format);
    std::cout << btpair::report_line(cfg, result) << "\n";
  }
  return 0;
}
