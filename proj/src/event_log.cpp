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
#include "v2i/event_log.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <utility>

namespace v2i {

namespace {

constexpr std::array<std::pair<EventKind, std::string_view>, 13> kKindNames{{
    {EventKind::FrameEmitted, "FRAME_EMITTED"},
    {EventKind::FrameRejected, "FRAME_REJECTED"},
    {EventKind::PacketSent, "PACKET_SENT"},
    {EventKind::PacketDropped, "PACKET_DROPPED"},
    {EventKind::PacketDelivered, "PACKET_DELIVERED"},
    {EventKind::ZoneEntered, "ZONE_ENTERED"},
    {EventKind::ZoneExited, "ZONE_EXITED"},
    {EventKind::AdvisoryActivated, "ADVISORY_ACTIVATED"},
    {EventKind::AdvisoryDeactivated, "ADVISORY_DEACTIVATED"},
    {EventKind::AdvisoryState, "ADVISORY_STATE"},
    {EventKind::PhaseChanged, "PHASE_CHANGED"},
    {EventKind::VehicleState, "VEHICLE_STATE"},
    {EventKind::RunEnded, "RUN_ENDED"},
}};

}  // namespace

std::string_view kind_name(EventKind k) noexcept
{
  for (const auto& [kind, name] : kKindNames)
    if (kind == k)
      return name;
  return "?";
}

std::optional<EventKind> kind_from_name(std::string_view name) noexcept
{
  for (const auto& [kind, n] : kKindNames)
    if (n == name)
      return kind;
  return std::nullopt;
}

std::string to_jsonl_line(const SimEvent& e)
{
  nlohmann::ordered_json line;
  line["tick"] = e.tick;
  line["kind"] = kind_name(e.kind);
  line["payload"] = e.payload;
  return line.dump();
}

void write_jsonl(std::ostream& out, const std::vector<SimEvent>& events)
{
  for (const auto& e : events)
    out << to_jsonl_line(e) << '\n';
}

std::string to_jsonl(const std::vector<SimEvent>& events)
{
  std::ostringstream os;
  write_jsonl(os, events);
  return os.str();
}

std::vector<SimEvent> read_jsonl(std::istream& in)
{
  std::vector<SimEvent> events;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.empty())
      continue;
    const std::string where = "MalformedLog: line " + std::to_string(line_no) + ": ";
    nlohmann::ordered_json j;
    try {
      j = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw LogError(where + e.what());
    }
    if (!j.is_object() || !j.contains("tick") || !j.contains("kind") || !j.contains("payload") || j.size() != 3)
      throw LogError(where + "expected exactly tick, kind, payload");
    if (!j["tick"].is_number_integer() || !j["kind"].is_string() || !j["payload"].is_object())
      throw LogError(where + "field has the wrong type");
    const auto kind = kind_from_name(j["kind"].get<std::string>());
    if (!kind)
      throw LogError(where + "unknown kind " + j["kind"].get<std::string>());
    SimEvent e;
    e.tick = j["tick"].get<std::int64_t>();
    e.kind = *kind;
    e.payload = std::move(j["payload"]);
    if (!events.empty() && e.tick < events.back().tick)
      throw LogError(where + "tick goes backwards");
    events.push_back(std::move(e));
  }
  return events;
}

std::vector<SimEvent> read_jsonl_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw LogError("MalformedLog: cannot open '" + path + "'");
  return read_jsonl(in);
}

}  // namespace v2i
