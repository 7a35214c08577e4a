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
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "v2i/advisory_engine.hpp"
#include "v2i/event_log.hpp"
#include "v2i/geo_zone.hpp"
#include "v2i/link.hpp"
#include "v2i/rsu_packet.hpp"
#include "v2i/spat_codec.hpp"

namespace v2i {

inline constexpr double kTickS = 0.1;
inline constexpr double kMinAccel = -4.5;
inline constexpr double kMaxAccel = 3.0;
inline constexpr double kFollowerGain = 2.0;
inline constexpr double kComfortBrake = -3.0;
inline constexpr std::int64_t kTicksAfterCrossing = 50;

/// Straight 1-D path from the spawn point through the stop bar.
struct ApproachRay
{
  GeoPoint spawn;
  GeoPoint stopbar;
  double length_m = 0.0;  ///< planar spawn-to-stopbar distance

  static ApproachRay between(const GeoPoint& spawn, const GeoPoint& stopbar, const GeoPoint& origin);

  /// Position `along_m` before the stop bar (negative: past it).
  GeoPoint at(double along_m) const;
};

struct VehicleState
{
  GeoPoint pos;
  double speed_mps = 0.0;
  double along_m = 0.0;  ///< signed distance to the stop bar, positive while approaching
};

/// Semi-implicit Euler step; the command is clamped to [kMinAccel, kMaxAccel]
/// and speed never goes below zero.
VehicleState step_vehicle(const VehicleState& v, double command_accel_mps2, const ApproachRay& ray,
                          double dt_s = kTickS);

enum class DriverKind { Scripted, AdviceFollower, External };

struct Scenario
{
  GeoPoint spawn;
  double initial_speed_mps = 0.0;
  int approach_phase_id = 1;
  DriverKind driver = DriverKind::AdviceFollower;
  std::vector<std::pair<std::int64_t, double>> script;  ///< (tick, accel), piecewise constant
  std::int64_t max_ticks = 1200;
  FrameFormat frame_format = FrameFormat::M60Like;
};

/// Rejected configuration detected before a run starts.
class SimConfigError : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
};

Scenario parse_scenario(std::string_view document);
Scenario load_scenario_file(const std::string& path);
std::string dump_scenario(const Scenario& s);

/// The signal-advisory pipeline, one 0.1 s tick per step():
/// controller frame -> RSU decode and package -> link -> OBU zone filter and
/// advisory -> driver -> vehicle.
class Simulation
{
 public:
  /// Throws SimConfigError or ConfigError.
  Simulation(ZoneConfig cfg, Scenario scenario, LinkConfig link, AdvisoryParams params = {});

  /// Advances one tick. `external_accel` drives EXTERNAL scenarios (coast when
  /// empty) and is ignored otherwise. Returns the events of this tick.
  std::vector<SimEvent> step(std::optional<double> external_accel = std::nullopt);

  bool finished() const noexcept { return finished_; }
  std::int64_t tick() const noexcept { return tick_; }
  const VehicleState& vehicle() const noexcept { return vehicle_; }
  const AdvisoryState& advisory() const noexcept { return obu_state_; }
  const ZoneConfig& config() const noexcept { return cfg_; }
  const Scenario& scenario() const noexcept { return scenario_; }
  const AdvisoryParams& params() const noexcept { return params_; }

  /// Back to tick 0 with the original vehicle and a fresh link.
  void reset();

 private:
  void emit(std::vector<SimEvent>& out, EventKind kind, nlohmann::ordered_json payload) const;
  void obu_receive(const RsuPacket& packet, std::vector<SimEvent>& out);
  void obu_leave_zone(const RsuPacket& packet, std::vector<SimEvent>& out);
  void record_advisory(const AdvisoryUpdate& upd, std::vector<SimEvent>& out);
  double driver_accel(std::optional<double> external_accel) const;

  ZoneConfig cfg_;
  Scenario scenario_;
  LinkConfig link_cfg_;
  AdvisoryParams params_;
  ApproachRay ray_;

  BroadcastLink link_;
  std::int64_t tick_ = 0;
  std::uint64_t next_packet_id_ = 0;
  VehicleState vehicle_;
  std::optional<int> gps_zone_;
  AdvisoryState obu_state_;
  std::optional<TriZone> obu_zone_;
  std::optional<std::int64_t> last_processed_sent_tick_;
  std::optional<std::int64_t> crossing_tick_;
  bool finished_ = false;
};

/// Runs to completion (max_ticks or kTicksAfterCrossing after the stop bar).
std::vector<SimEvent> run_scenario(const ZoneConfig& cfg, const Scenario& scenario, const LinkConfig& link,
                                   const AdvisoryParams& params = {});

}  // namespace v2i
