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
#include <optional>
#include <string>

#include "v2i/spat_codec.hpp"

namespace v2i {

/// Fixed-time timing of one phase. Within each cycle the phase shows
/// GREEN on [0, green), YELLOW on [green, green + yellow) and RED for the rest,
/// counted from offset_ds.
struct PhaseTiming
{
  std::int64_t offset_ds = 0;
  std::int64_t green_ds = 1;
  std::int64_t yellow_ds = 1;

  friend bool operator==(const PhaseTiming&, const PhaseTiming&) = default;
};

struct SignalPlan
{
  std::int64_t cycle_ds = 900;
  std::array<PhaseTiming, kPhaseCount> phases{};  ///< phases[i] is phase i+1

  const PhaseTiming& timing(int phase_id) const { return phases.at(static_cast<std::size_t>(phase_id - 1)); }

  friend bool operator==(const SignalPlan&, const SignalPlan&) = default;
};

/// Returns a description of the first violated plan invariant, or nullopt.
std::optional<std::string> plan_violation(const SignalPlan& plan);

/// Color and countdown of one phase at controller time t_ds.
PhaseState phase_state_at(const SignalPlan& plan, int phase_id, std::int64_t t_ds);

/// Full controller snapshot at t_ds. controller_time_ds = t_ds and seq = t_ds mod 65536.
SpatSnapshot controller_state(const SignalPlan& plan, std::int64_t t_ds, std::uint32_t intersection_id = 0);

}  // namespace v2i
