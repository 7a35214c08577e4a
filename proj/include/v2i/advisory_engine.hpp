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

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <variant>
#include <vector>

#include "v2i/spat_codec.hpp"

namespace v2i {

struct Interval
{
  Color color;
  std::int64_t start_ds;
  std::int64_t end_ds;

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Current color followed by the next two, in deciseconds from "now".
/// Three consecutive colors of the cycle always contain exactly one GREEN.
struct PhaseSchedule
{
  std::array<Interval, 3> intervals{};

  friend bool operator==(const PhaseSchedule&, const PhaseSchedule&) = default;
};

struct GreenWindow
{
  double start_s;
  double end_s;
};

struct AdvisoryParams
{
  double max_start_m = 500.0;       ///< advice starts at or inside this distance
  double min_stop_m = 20.0;         ///< advice stops below this distance
  double green_end_margin_s = 1.0;  ///< never target the last instants of green
  double v_floor_mps = 2.0;         ///< slowest speed ever recommended
};

namespace advice {
struct Proceed
{
  double target_mps;
  double lo_mps;
  double hi_mps;
  friend bool operator==(const Proceed&, const Proceed&) = default;
};
struct PrepareToStop
{
  friend bool operator==(const PrepareToStop&, const PrepareToStop&) = default;
};
struct None
{
  friend bool operator==(const None&, const None&) = default;
};
}  // namespace advice

using SpeedRecommendation = std::variant<advice::None, advice::Proceed, advice::PrepareToStop>;

/// "none" | "proceed" | "stop", as used on the live protocol.
std::string_view recommendation_kind(const SpeedRecommendation& r) noexcept;

/// What the driver display shows. phase_id == 0 means no phase has been tracked
/// yet (fresh or reset state).
struct AdvisoryState
{
  bool active = false;
  int phase_id = 0;
  std::uint32_t countdown_ds = 0;
  Color current_color = Color::Red;
  SpeedRecommendation recommendation = advice::None{};
  double distance_m = 0.0;
};

enum class DeactivationReason { PassedMinDist, LeftZone, BeyondMaxDist };

std::string_view reason_name(DeactivationReason r) noexcept;

namespace event {
struct PhaseChanged
{
  int phase_id;
  Color from;
  Color to;
  bool beep;
};
struct Activated
{
  int phase_id;
};
struct Deactivated
{
  int phase_id;
  DeactivationReason reason;
};
}  // namespace event

using AdvisoryEvent = std::variant<event::PhaseChanged, event::Activated, event::Deactivated>;

class AdvisoryError : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
};

PhaseSchedule build_schedule(const PhaseState& ps);

/// Bounds of the schedule's GREEN interval in seconds.
GreenWindow green_window_s(const PhaseSchedule& sched);

/// Constant-speed advice: fastest speed in [v_floor, limit] that reaches the
/// stop bar inside the green window trimmed by green_end_margin_s.
SpeedRecommendation compute_speed_advice(double distance_m, const PhaseSchedule& sched, double speed_limit_mps,
                                         const AdvisoryParams& params);

struct AdvisoryUpdate
{
  AdvisoryState state;
  std::vector<AdvisoryEvent> events;
};

/// One step of the display state machine, called per received SPaT packet.
/// Throws AdvisoryError (PhaseMismatch) when an active state is fed a different
/// phase; callers reset to AdvisoryState{} on a zone change.
AdvisoryUpdate update(const AdvisoryState& prev, const PhaseState& ps, double distance_m, bool vehicle_in_zone,
                      double speed_limit_mps, const AdvisoryParams& params);

}  // namespace v2i
