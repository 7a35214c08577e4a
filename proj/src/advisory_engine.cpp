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
#include "v2i/advisory_engine.hpp"

#include <algorithm>
#include <string>

namespace v2i {

std::string_view recommendation_kind(const SpeedRecommendation& r) noexcept
{
  if (std::holds_alternative<advice::Proceed>(r))
    return "proceed";
  if (std::holds_alternative<advice::PrepareToStop>(r))
    return "stop";
  return "none";
}

std::string_view reason_name(DeactivationReason r) noexcept
{
  switch (r) {
    case DeactivationReason::PassedMinDist: return "PASSED_MIN_DIST";
    case DeactivationReason::LeftZone: return "LEFT_ZONE";
    case DeactivationReason::BeyondMaxDist: return "BEYOND_MAX_DIST";
  }
  return "?";
}

PhaseSchedule build_schedule(const PhaseState& ps)
{
  const std::int64_t t1 = ps.remaining_ds;
  const std::int64_t t2 = t1 + ps.next1_ds;
  const std::int64_t t3 = t2 + ps.next2_ds;
  const Color c1 = next_color(ps.color);
  const Color c2 = next_color(c1);
  return PhaseSchedule{{Interval{ps.color, 0, t1}, Interval{c1, t1, t2}, Interval{c2, t2, t3}}};
}

GreenWindow green_window_s(const PhaseSchedule& sched)
{
  const auto it = std::find_if(sched.intervals.begin(), sched.intervals.end(),
                               [](const Interval& i) { return i.color == Color::Green; });
  // Unreachable for schedules built from a PhaseState.
  if (it == sched.intervals.end())
    return {0.0, 0.0};
  return {static_cast<double>(it->start_ds) / 10.0, static_cast<double>(it->end_ds) / 10.0};
}

SpeedRecommendation compute_speed_advice(double distance_m, const PhaseSchedule& sched, double speed_limit_mps,
                                         const AdvisoryParams& params)
{
  const auto [g0, g1] = green_window_s(sched);
  const double g1_trim = g1 - params.green_end_margin_s;
  if (g1_trim <= g0)
    return advice::PrepareToStop{};

  const double slowest_on_time = distance_m / g1_trim;
  const double fastest_on_time = g0 == 0.0 ? speed_limit_mps : std::min(speed_limit_mps, distance_m / g0);
  const double lo = std::max(slowest_on_time, params.v_floor_mps);
  const double hi = std::min(fastest_on_time, speed_limit_mps);
  if (lo > hi)
    return advice::PrepareToStop{};
  return advice::Proceed{hi, lo, hi};
}

AdvisoryUpdate update(const AdvisoryState& prev, const PhaseState& ps, double distance_m, bool vehicle_in_zone,
                      double speed_limit_mps, const AdvisoryParams& params)
{
  if (prev.active && prev.phase_id != ps.phase_id)
    throw AdvisoryError("PhaseMismatch: active advisory for phase " + std::to_string(prev.phase_id) +
                        " fed phase " + std::to_string(ps.phase_id));

  AdvisoryUpdate out;
  auto& next = out.state;
  next.active = vehicle_in_zone && distance_m >= params.min_stop_m && distance_m <= params.max_start_m;
  next.phase_id = ps.phase_id;
  next.countdown_ds = ps.remaining_ds;
  next.current_color = ps.color;
  next.distance_m = distance_m;
  next.recommendation = next.active
                            ? compute_speed_advice(distance_m, build_schedule(ps), speed_limit_mps, params)
                            : SpeedRecommendation{advice::None{}};

  if (!prev.active && next.active)
    out.events.emplace_back(event::Activated{ps.phase_id});
  if (prev.active && !next.active) {
    DeactivationReason why = DeactivationReason::BeyondMaxDist;
    if (!vehicle_in_zone)
      why = DeactivationReason::LeftZone;
    else if (distance_m < params.min_stop_m)
      why = DeactivationReason::PassedMinDist;
    out.events.emplace_back(event::Deactivated{prev.phase_id, why});
  }
  // Transitions are only announced while the display is up.
  if (prev.active && next.active && ps.color != prev.current_color)
    out.events.emplace_back(event::PhaseChanged{ps.phase_id, prev.current_color, ps.color, true});
  return out;
}

}  // namespace v2i
