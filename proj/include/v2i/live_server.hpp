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
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "v2i/simulation.hpp"

namespace v2i {

// Live protocol (JSON text frames over WebSocket):
//   server -> client  {"type":"hello","config_digest":"..","tick_ms":100}      once, on connect
//   server -> client  {"type":"state","tick":..,"vehicle":{..},"advisory":{..},"events":[..]}
//   client -> server  {"type":"control","accel_mps2":x} | {"type":"reset"}

namespace live {

struct Control
{
  double accel_mps2;
};
struct Reset
{
};
struct Invalid
{
  std::string reason;
};

using ClientMessage = std::variant<Control, Reset, Invalid>;

ClientMessage parse_client_message(std::string_view text);

/// FNV-1a 64 over the canonical config document, as 16 hex digits.
std::string config_digest(const ZoneConfig& cfg);

std::string hello_message(const std::string& digest, int tick_ms);

/// State broadcast for the tick just simulated; `events` are that tick's
/// simulation events (only advisory events are forwarded).
std::string state_message(const Simulation& sim, std::int64_t tick, const std::vector<SimEvent>& events);

}  // namespace live

struct LiveServerOptions
{
  std::string address = "127.0.0.1";
  unsigned short port = 8765;  ///< 0 picks a free port
  int tick_ms = 100;
};

/// Real-time driver of an EXTERNAL-driver Simulation. One thread paces the
/// simulation; one thread runs all socket I/O. Control messages cross between
/// them through a mutex-guarded inbox read once per tick, so a slow or absent
/// client never stalls the loop. The run restarts when it finishes.
class LiveServer
{
 public:
  LiveServer(Simulation sim, LiveServerOptions opts);
  ~LiveServer();

  LiveServer(const LiveServer&) = delete;
  LiveServer& operator=(const LiveServer&) = delete;

  /// Binds and starts both threads; returns the bound port.
  unsigned short start();
  void stop();
  /// Blocks until stop() is called from another thread.
  void wait();

  std::int64_t ticks_run() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace v2i
