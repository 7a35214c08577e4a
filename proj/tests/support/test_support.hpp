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

// Oracles and generators shared by the unit and acceptance suites. The oracles
// deliberately avoid the library's own helpers so they can catch its mistakes.

#include <cmath>
#include <numbers>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "v2i/advisory_engine.hpp"
#include "v2i/geo_zone.hpp"
#include "v2i/signal_plan.hpp"
#include "v2i/spat_codec.hpp"

namespace v2i::testing {

inline std::string reference_config_path()
{
  return std::string(V2I_SOURCE_DIR) + "/configs/reference_8phase.json";
}

inline std::string scenario_path(const std::string& name)
{
  return std::string(V2I_SOURCE_DIR) + "/scenarios/" + name;
}

// Bitwise CRC-16/CCITT-FALSE straight from the definition.
inline std::uint16_t crc16_oracle(const std::vector<std::uint8_t>& data, std::size_t n)
{
  std::uint16_t crc = 0xFFFF;
  for (std::size_t i = 0; i < n; ++i) {
    for (int bit = 7; bit >= 0; --bit) {
      const bool in = (data[i] >> bit) & 1U;
      const bool top = (crc & 0x8000U) != 0;
      crc = static_cast<std::uint16_t>(crc << 1);
      if (in != top)
        crc ^= 0x1021;
    }
  }
  return crc;
}

// Barycentric containment in the same equirectangular frame, written from the
// textbook formula with a tolerance scaled to the triangle.
inline bool barycentric_inside(const GeoPoint& p, const TriZone& z, const GeoPoint& origin)
{
  const double k = kEarthRadiusM * std::numbers::pi / 180.0;
  const double c = std::cos(origin.lat_deg * std::numbers::pi / 180.0);
  auto xy = [&](const GeoPoint& g) {
    return std::pair{k * (g.lon_deg - origin.lon_deg) * c, k * (g.lat_deg - origin.lat_deg)};
  };
  const auto [px, py] = xy(p);
  const auto [ax, ay] = xy(z.vertices[0]);
  const auto [bx, by] = xy(z.vertices[1]);
  const auto [cx, cy] = xy(z.vertices[2]);
  const double det = (by - cy) * (ax - cx) + (cx - bx) * (ay - cy);
  const double l1 = ((by - cy) * (px - cx) + (cx - bx) * (py - cy)) / det;
  const double l2 = ((cy - ay) * (px - cx) + (ax - cx) * (py - cy)) / det;
  const double l3 = 1.0 - l1 - l2;
  return l1 >= 0.0 && l2 >= 0.0 && l3 >= 0.0;
}

inline SpatSnapshot random_snapshot(std::mt19937_64& rng, std::uint32_t max_id, std::uint32_t max_time,
                                    std::uint32_t max_seq)
{
  std::uniform_int_distribution<std::uint32_t> id(0, max_id), time(0, max_time), seq(0, max_seq);
  std::uniform_int_distribution<std::uint32_t> rem(1, 0xFFFF), dur(0, 0xFFFF);
  std::uniform_int_distribution<int> color(0, 2);
  SpatSnapshot s = make_snapshot(id(rng));
  s.controller_time_ds = time(rng);
  s.seq = seq(rng);
  for (auto& p : s.phases) {
    p.color = static_cast<Color>(color(rng));
    p.remaining_ds = rem(rng);
    p.next1_ds = dur(rng);
    p.next2_ds = dur(rng);
  }
  return s;
}

inline SignalPlan random_plan(std::mt19937_64& rng)
{
  SignalPlan plan;
  plan.cycle_ds = std::uniform_int_distribution<std::int64_t>(600, 1500)(rng);
  for (auto& t : plan.phases) {
    t.yellow_ds = std::uniform_int_distribution<std::int64_t>(30, 50)(rng);
    t.green_ds = std::uniform_int_distribution<std::int64_t>(50, plan.cycle_ds / 2)(rng);
    t.offset_ds = std::uniform_int_distribution<std::int64_t>(0, plan.cycle_ds - 1)(rng);
  }
  return plan;
}

// Brute-force reference for PREPARE_TO_STOP: does any of `samples` evenly
// spaced constant speeds in [v_floor, limit] arrive within [g0, g1 - margin]?
inline bool any_feasible_speed(double d, const PhaseState& ps, double limit, const AdvisoryParams& params,
                               int samples = 1000)
{
  // Green window recomputed from the raw durations, without build_schedule.
  double g0 = 0, g1 = 0;
  const double r = ps.remaining_ds / 10.0, n1 = ps.next1_ds / 10.0, n2 = ps.next2_ds / 10.0;
  switch (ps.color) {
    case Color::Green: g0 = 0; g1 = r; break;
    case Color::Red: g0 = r; g1 = r + n1; break;
    case Color::Yellow: g0 = r + n1; g1 = r + n1 + n2; break;
  }
  const double end = g1 - params.green_end_margin_s;
  for (int i = 0; i < samples; ++i) {
    const double v = params.v_floor_mps + (limit - params.v_floor_mps) * i / (samples - 1);
    const double t = d / v;
    if (t >= g0 && t <= end)
      return true;
  }
  return false;
}

}  // namespace v2i::testing
