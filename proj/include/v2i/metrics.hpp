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
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "v2i/event_log.hpp"

namespace v2i {

struct MetricsReport
{
  std::int64_t stops = 0;  ///< resumes from a standstill reached while driving
  double time_stopped_s = 0.0;
  std::optional<std::int64_t> arrival_tick;  ///< first tick observed at or past the stop bar
  /// Color showing when the bar was crossed: the previous tick's color unless
  /// the vehicle sits exactly on the bar at arrival_tick.
  bool arrived_on_green = false;
  bool red_violation = false;
  double mean_speed_mps = 0.0;
  std::int64_t packets_sent = 0;
  std::int64_t packets_dropped = 0;
  std::int64_t packets_delivered = 0;
  std::int64_t packets_in_flight = 0;  ///< sent but neither dropped nor delivered when the log ends

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// Recomputes the report from a run's event log alone. Throws LogError
/// (MalformedLog) for logs that violate the event contract.
MetricsReport compute_metrics(const std::vector<SimEvent>& events);

nlohmann::ordered_json to_json(const MetricsReport& m);

}  // namespace v2i
