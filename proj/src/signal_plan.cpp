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
#include "v2i/signal_plan.hpp"

namespace v2i {

std::optional<std::string> plan_violation(const SignalPlan& plan)
{
  if (plan.cycle_ds <= 0)
    return "cycle_ds must be positive";
  if (plan.cycle_ds > 0xFFFF)
    return "cycle_ds must fit in 16 bits";
  for (int id = 1; id <= kPhaseCount; ++id) {
    const auto& t = plan.timing(id);
    const std::string where = "phase " + std::to_string(id) + ": ";
    if (t.offset_ds < 0 || t.offset_ds >= plan.cycle_ds)
      return where + "offset_ds must lie in [0, cycle_ds)";
    if (t.green_ds <= 0)
      return where + "green_ds must be positive";
    if (t.yellow_ds <= 0)
      return where + "yellow_ds must be positive";
    if (t.green_ds + t.yellow_ds >= plan.cycle_ds)
      return where + "green_ds + yellow_ds must leave a positive red interval";
  }
  return std::nullopt;
}

PhaseState phase_state_at(const SignalPlan& plan, int phase_id, std::int64_t t_ds)
{
  const auto& t = plan.timing(phase_id);
  const std::int64_t cycle = plan.cycle_ds;
  const std::int64_t red = cycle - t.green_ds - t.yellow_ds;
  std::int64_t u = (t_ds - t.offset_ds) % cycle;
  if (u < 0)
    u += cycle;

  PhaseState ps;
  ps.phase_id = phase_id;
  if (u < t.green_ds) {
    ps.color = Color::Green;
    ps.remaining_ds = static_cast<std::uint32_t>(t.green_ds - u);
    ps.next1_ds = static_cast<std::uint32_t>(t.yellow_ds);
    ps.next2_ds = static_cast<std::uint32_t>(red);
  } else if (u < t.green_ds + t.yellow_ds) {
    ps.color = Color::Yellow;
    ps.remaining_ds = static_cast<std::uint32_t>(t.green_ds + t.yellow_ds - u);
    ps.next1_ds = static_cast<std::uint32_t>(red);
    ps.next2_ds = static_cast<std::uint32_t>(t.green_ds);
  } else {
    ps.color = Color::Red;
    ps.remaining_ds = static_cast<std::uint32_t>(cycle - u);
    ps.next1_ds = static_cast<std::uint32_t>(t.green_ds);
    ps.next2_ds = static_cast<std::uint32_t>(t.yellow_ds);
  }
  return ps;
}

SpatSnapshot controller_state(const SignalPlan& plan, std::int64_t t_ds, std::uint32_t intersection_id)
{
  SpatSnapshot s = make_snapshot(intersection_id);
  s.controller_time_ds = static_cast<std::uint32_t>(t_ds);
  s.seq = static_cast<std::uint32_t>(t_ds & 0xFFFF);
  for (int id = 1; id <= kPhaseCount; ++id)
    s.phases[static_cast<std::size_t>(id - 1)] = phase_state_at(plan, id, t_ds);
  return s;
}

}  // namespace v2i
