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
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace v2i {

enum class EventKind {
  FrameEmitted,
  FrameRejected,
  PacketSent,
  PacketDropped,
  PacketDelivered,
  ZoneEntered,
  ZoneExited,
  AdvisoryActivated,
  AdvisoryDeactivated,
  AdvisoryState,
  PhaseChanged,
  VehicleState,
  RunEnded,
};

std::string_view kind_name(EventKind k) noexcept;
std::optional<EventKind> kind_from_name(std::string_view name) noexcept;

/// One timestamped record of a run. Payload keys keep insertion order so the
/// JSONL form is byte-stable.
struct SimEvent
{
  std::int64_t tick = 0;
  EventKind kind = EventKind::VehicleState;
  nlohmann::ordered_json payload = nlohmann::ordered_json::object();

  friend bool operator==(const SimEvent&, const SimEvent&) = default;
};

class LogError : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
};

/// `{"tick":..,"kind":"..","payload":{..}}` with no trailing newline.
std::string to_jsonl_line(const SimEvent& e);
void write_jsonl(std::ostream& out, const std::vector<SimEvent>& events);
std::string to_jsonl(const std::vector<SimEvent>& events);

/// Throws LogError (MalformedLog) with the offending 1-based line number.
std::vector<SimEvent> read_jsonl(std::istream& in);
std::vector<SimEvent> read_jsonl_file(const std::string& path);

}  // namespace v2i
