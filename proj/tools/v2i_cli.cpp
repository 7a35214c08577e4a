/*
 * Copyright (C) 2026 The v2i-advisory Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may not
 * use this file except in compliance with the License. You may obtain a copy of
 * the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
 * WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
 * License for the specific language governing permissions and limitations under
 * the License.
 */

// v2i: codec tools, zone-config validation, headless runs, metrics replay and
// the live bridge for the driver console.
//
// Exit codes: 0 success, 2 domain error (bad frame, bad config, ...), 1 internal fault.

#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "v2i/event_log.hpp"
#include "v2i/geo_zone.hpp"
#include "v2i/live_server.hpp"
#include "v2i/metrics.hpp"
#include "v2i/simulation.hpp"
#include "v2i/snapshot_json.hpp"
#include "v2i/spat_codec.hpp"

namespace {

constexpr int kExitDomain = 2;
constexpr int kExitFault = 1;

struct DomainError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path)
{
  std::ostringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path);
  if (!in)
    throw DomainError("cannot open '" + path + "'");
  buf << in.rdbuf();
  return buf.str();
}

v2i::LinkConfig parse_link(double drop, const std::string& latency, std::uint64_t seed)
{
  v2i::LinkConfig link;
  link.drop_prob = drop;
  link.seed = seed;
  const auto colon = latency.find(':');
  try {
    if (colon == std::string::npos) {
      link.latency_min_ticks = link.latency_max_ticks = std::stoll(latency);
    } else {
      link.latency_min_ticks = std::stoll(latency.substr(0, colon));
      link.latency_max_ticks = std::stoll(latency.substr(colon + 1));
    }
  } catch (const std::exception&) {
    throw DomainError("--latency expects <min>:<max> ticks, got '" + latency + "'");
  }
  if (auto why = v2i::link_violation(link))
    throw DomainError("link: " + *why);
  return link;
}

int cmd_decode(const std::string& format, const std::string& hex_path)
{
  const auto bytes = v2i::parse_hex_octets(read_input(hex_path));
  v2i::SpatSnapshot s;
  if (format == "auto")
    s = v2i::decode_frame(bytes);
  else if (format == "m60")
    s = v2i::decode_m60(bytes);
  else
    s = v2i::decode_tw900(bytes);
  std::cout << v2i::snapshot_to_json(s).dump(2) << '\n';
  return 0;
}

int cmd_encode(const std::string& format, const std::string& json_path)
{
  const auto s = v2i::snapshot_from_json(read_input(json_path));
  if (format == "rsu")
    std::cout << v2i::encode_rsu_string(s) << '\n';
  else if (format == "m60")
    std::cout << v2i::to_hex_octets(v2i::encode_m60(s)) << '\n';
  else
    std::cout << v2i::to_hex_octets(v2i::encode_tw900(s)) << '\n';
  return 0;
}

int cmd_validate(const std::string& path)
{
  try {
    const auto cfg = v2i::load_zone_config(read_input(path));
    std::cout << "ok: intersection " << cfg.intersection_id << ", " << cfg.zones.size() << " zones\n";
    return 0;
  } catch (const v2i::ConfigError& e) {
    if (e.kind() == v2i::ConfigError::Kind::Schema) {
      std::cout << e.what() << '\n';
    } else {
      for (const auto& issue : e.issues()) {
        std::cout << "ValidationError";
        if (issue.zone_index)
          std::cout << " zone " << *issue.zone_index;
        std::cout << ": " << v2i::issue_name(issue.kind) << ": " << issue.reason << '\n';
      }
    }
    return kExitDomain;
  }
}

int cmd_run(const std::string& config, const std::string& scenario, double drop, const std::string& latency,
            std::uint64_t seed, const std::string& out_path)
{
  const auto cfg = v2i::load_zone_config(read_input(config));
  const auto sc = v2i::parse_scenario(read_input(scenario));
  const auto link = parse_link(drop, latency, seed);
  const auto events = v2i::run_scenario(cfg, sc, link);

  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out)
      throw DomainError("cannot write '" + out_path + "'");
    v2i::write_jsonl(out, events);
  }
  std::cout << v2i::to_json(v2i::compute_metrics(events)).dump(2) << '\n';
  return 0;
}

int cmd_metrics(const std::string& path)
{
  std::istringstream in(read_input(path));
  const auto events = v2i::read_jsonl(in);
  std::cout << v2i::to_json(v2i::compute_metrics(events)).dump(2) << '\n';
  return 0;
}

std::atomic<bool> g_interrupted{false};

extern "C" void on_signal(int)
{
  g_interrupted = true;
}

int cmd_serve(const std::string& config, const std::string& scenario, const std::string& address, unsigned short port,
              int tick_ms)
{
  auto cfg = v2i::load_zone_config(read_input(config));
  auto sc = v2i::parse_scenario(read_input(scenario));
  v2i::Simulation sim(std::move(cfg), std::move(sc), v2i::LinkConfig{});
  v2i::LiveServer server(std::move(sim), v2i::LiveServerOptions{address, port, tick_ms});
  const auto bound = server.start();
  std::cerr << "serving ws://" << address << ':' << bound << "/ at " << tick_ms << " ms/tick (Ctrl-C to stop)\n";

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  while (!g_interrupted)
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  server.stop();
  std::cerr << "stopped after " << server.ticks_run() << " ticks\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"V2I intersection approach advisory: SPaT codec, simulator and live bridge"};
  app.require_subcommand(1);

  std::string format = "auto";
  std::string input = "-";
  auto* decode = app.add_subcommand("decode", "Decode a raw controller frame (hex octets) to JSON");
  decode->add_option("--format", format, "Frame format")->check(CLI::IsMember({"auto", "m60", "tw900"}));
  decode->add_option("--hex", input, "File of whitespace-separated hex octets, or - for stdin");

  std::string enc_format;
  auto* encode = app.add_subcommand("encode", "Encode a JSON snapshot to a raw frame (hex) or an RSU string");
  encode->add_option("--format", enc_format, "Output format")
      ->required()
      ->check(CLI::IsMember({"m60", "tw900", "rsu"}));
  encode->add_option("--json", input, "Snapshot JSON file, or - for stdin");

  std::string config_path;
  auto* validate = app.add_subcommand("validate-config", "Validate a zone-setup configuration");
  validate->add_option("config", config_path, "Zone config JSON")->required();

  std::string scenario_path;
  std::string out_path;
  std::string latency = "0:0";
  double drop = 0.0;
  std::uint64_t seed = 0;
  auto* run = app.add_subcommand("run", "Run a scenario headless; write the JSONL event log and print metrics");
  run->add_option("--config", config_path, "Zone config JSON")->required();
  run->add_option("--scenario", scenario_path, "Scenario JSON")->required();
  run->add_option("--drop", drop, "Packet drop probability");
  run->add_option("--latency", latency, "Link latency range in ticks, <min>:<max>");
  run->add_option("--seed", seed, "Link PRNG seed");
  run->add_option("--out", out_path, "Event log output (JSONL)");

  std::string log_path;
  auto* metrics = app.add_subcommand("metrics", "Recompute the metrics report from a JSONL event log");
  metrics->add_option("events", log_path, "Event log (JSONL)")->required();

  std::string address = "127.0.0.1";
  unsigned short port = 8765;
  int tick_ms = 100;
  auto* serve = app.add_subcommand("serve", "Run an external-driver scenario in real time over WebSocket");
  serve->add_option("--config", config_path, "Zone config JSON")->required();
  serve->add_option("--scenario", scenario_path, "Scenario JSON (driver type external)")->required();
  serve->add_option("--address", address, "Listen address");
  serve->add_option("--port", port, "Listen port");
  serve->add_option("--tick-ms", tick_ms, "Wall-clock milliseconds per tick");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitDomain;
  }

  try {
    if (*decode)
      return cmd_decode(format, input);
    if (*encode)
      return cmd_encode(enc_format, input);
    if (*validate)
      return cmd_validate(config_path);
    if (*run)
      return cmd_run(config_path, scenario_path, drop, latency, seed, out_path);
    if (*metrics)
      return cmd_metrics(log_path);
    if (*serve)
      return cmd_serve(config_path, scenario_path, address, port, tick_ms);
  } catch (const v2i::CodecError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const v2i::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const v2i::SimConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const v2i::LogError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::invalid_argument& e) {
    // BadHexDigit
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitFault;
  }
  return kExitFault;
}
