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
#include "v2i/metrics.hpp"

namespace v2i {

namespace {

double number_field(const SimEvent& e, const char* key)
{
  const auto it = e.payload.find(key);
  if (it == e.payload.end() || !it->is_number())
    throw LogError("MalformedLog: tick " + std::to_string(e.tick) + ": " + std::string(kind_name(e.kind)) +
                   " lacks numeric '" + key + "'");
  return it->get<double>();
}

std::string string_field(const SimEvent& e, const char* key)
{
  const auto it = e.payload.find(key);
  if (it == e.payload.end() || !it->is_string())
    throw LogError("MalformedLog: tick " + std::to_string(e.tick) + ": " + std::string(kind_name(e.kind)) +
                   " lacks string '" + key + "'");
  return it->get<std::string>();
}

}  // namespace

MetricsReport compute_metrics(const std::vector<SimEvent>& events)
{
  MetricsReport m;
  double speed_sum = 0.0;
  std::int64_t samples = 0;
  std::int64_t stopped_ticks = 0;
  std::optional<double> prev_speed;
  bool halted = false;  // at rest after having moved
  std::optional<std::string> prev_signal;
  std::optional<std::int64_t> prev_tick;

  for (const auto& e : events) {
    if (prev_tick && e.tick < *prev_tick)
      throw LogError("MalformedLog: tick " + std::to_string(e.tick) + " goes backwards");
    prev_tick = e.tick;

    switch (e.kind) {
      case EventKind::PacketSent: ++m.packets_sent; break;
      case EventKind::PacketDropped: ++m.packets_dropped; break;
      case EventKind::PacketDelivered: ++m.packets_delivered; break;
      case EventKind::VehicleState: {
        const double speed = number_field(e, "speed_mps");
        const double along = number_field(e, "along_m");
        const std::string signal = string_field(e, "signal");
        speed_sum += speed;
        ++samples;
        if (speed == 0.0)
          ++stopped_ticks;
        if (prev_speed && *prev_speed > 0.0 && speed == 0.0)
          halted = true;
        if (halted && speed > 0.0) {
          ++m.stops;
          halted = false;
        }
        prev_speed = speed;
        if (!m.arrival_tick && along <= 0.0) {
          m.arrival_tick = e.tick;
          // Unless the bar is hit exactly on this tick, it was crossed during
          // the previous tick, while the previous tick's color was showing.
          const std::string& at_crossing = along < 0.0 && prev_signal ? *prev_signal : signal;
          m.arrived_on_green = at_crossing == "G";
          m.red_violation = at_crossing == "R";
        }
        prev_signal = signal;
        break;
      }
      default: break;
    }
  }

  if (m.packets_dropped + m.packets_delivered > m.packets_sent)
    throw LogError("MalformedLog: more packets dropped or delivered than sent");
  m.packets_in_flight = m.packets_sent - m.packets_dropped - m.packets_delivered;
  m.time_stopped_s = static_cast<double>(stopped_ticks) / 10.0;
  m.mean_speed_mps = samples ? speed_sum / static_cast<double>(samples) : 0.0;
  return m;
}

nlohmann::ordered_json to_json(const MetricsReport& m)
{
  nlohmann::ordered_json j;
  j["stops"] = m.stops;
  j["time_stopped_s"] = m.time_stopped_s;
  j["arrival_tick"] = m.arrival_tick ? nlohmann::ordered_json(*m.arrival_tick) : nlohmann::ordered_json(nullptr);
  j["arrived_on_green"] = m.arrived_on_green;
  j["red_violation"] = m.red_violation;
  j["mean_speed_mps"] = m.mean_speed_mps;
  j["packets_sent"] = m.packets_sent;
  j["packets_dropped"] = m.packets_dropped;
  j["packets_delivered"] = m.packets_delivered;
  j["packets_in_flight"] = m.packets_in_flight;
  return j;
}

}  // namespace v2i
