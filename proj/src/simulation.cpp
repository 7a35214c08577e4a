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
#include "v2i/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json_strict.hpp"
#include "v2i/signal_plan.hpp"
#include "v2i/snapshot_json.hpp"

namespace v2i {

using ojson = nlohmann::ordered_json;

// --- vehicle ---------------------------------------------------------------

ApproachRay ApproachRay::between(const GeoPoint& spawn, const GeoPoint& stopbar, const GeoPoint& origin)
{
  const LocalPoint a = project_local(spawn, origin);
  const LocalPoint b = project_local(stopbar, origin);
  return {spawn, stopbar, std::hypot(a.x - b.x, a.y - b.y)};
}

GeoPoint ApproachRay::at(double along_m) const
{
  if (length_m == 0.0)
    return stopbar;
  const double f = along_m / length_m;
  return {stopbar.lat_deg + (spawn.lat_deg - stopbar.lat_deg) * f,
          stopbar.lon_deg + (spawn.lon_deg - stopbar.lon_deg) * f};
}

VehicleState step_vehicle(const VehicleState& v, double command_accel_mps2, const ApproachRay& ray, double dt_s)
{
  const double a = std::clamp(command_accel_mps2, kMinAccel, kMaxAccel);
  VehicleState next;
  next.speed_mps = std::max(0.0, v.speed_mps + a * dt_s);
  next.along_m = v.along_m - next.speed_mps * dt_s;
  next.pos = ray.at(next.along_m);
  return next;
}

// --- scenario documents ----------------------------------------------------

namespace {

std::string_view driver_name(DriverKind k)
{
  switch (k) {
    case DriverKind::Scripted: return "scripted";
    case DriverKind::AdviceFollower: return "advice_follower";
    case DriverKind::External: return "external";
  }
  return "?";
}

Scenario parse_scenario_impl(std::string_view document)
{
  using namespace detail;
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    schema_fail("", std::string("not valid JSON: ") + e.what());
  }
  expect_keys(root, "", {"spawn", "initial_speed_mps", "approach_phase_id", "driver", "max_ticks"}, {"frame_format"});

  Scenario s;
  s.spawn = read_pair(root["spawn"], "/spawn");
  s.initial_speed_mps = read_real(root["initial_speed_mps"], "/initial_speed_mps");
  s.approach_phase_id = static_cast<int>(read_int(root["approach_phase_id"], "/approach_phase_id"));
  s.max_ticks = read_int(root["max_ticks"], "/max_ticks");

  const auto& drv = root["driver"];
  expect_keys(drv, "/driver", {"type"}, {"script"});
  const auto type = read_string(drv["type"], "/driver/type");
  if (type == "scripted")
    s.driver = DriverKind::Scripted;
  else if (type == "advice_follower")
    s.driver = DriverKind::AdviceFollower;
  else if (type == "external")
    s.driver = DriverKind::External;
  else
    schema_fail("/driver/type", "expected scripted, advice_follower or external");

  if (drv.contains("script")) {
    const auto& script = drv["script"];
    if (!script.is_array())
      schema_fail("/driver/script", "expected an array of [tick, accel]");
    for (std::size_t i = 0; i < script.size(); ++i) {
      const std::string at = "/driver/script/" + std::to_string(i);
      if (!script[i].is_array() || script[i].size() != 2)
        schema_fail(at, "expected [tick, accel]");
      s.script.emplace_back(read_int(script[i][0], at + "/0"), read_real(script[i][1], at + "/1"));
    }
  } else if (s.driver == DriverKind::Scripted) {
    schema_fail("/driver/script", "missing field (required for scripted drivers)");
  }

  if (root.contains("frame_format")) {
    const auto f = read_string(root["frame_format"], "/frame_format");
    if (f == "m60")
      s.frame_format = FrameFormat::M60Like;
    else if (f == "tw900")
      s.frame_format = FrameFormat::Tw900Like;
    else
      schema_fail("/frame_format", "expected m60 or tw900");
  }
  return s;
}

}  // namespace

Scenario parse_scenario(std::string_view document)
{
  try {
    return parse_scenario_impl(document);
  } catch (const detail::SchemaViolation& v) {
    throw SimConfigError("SchemaError at " + v.path + ": " + v.reason);
  }
}

Scenario load_scenario_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw SimConfigError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string dump_scenario(const Scenario& s)
{
  ojson root;
  root["spawn"] = ojson::array({s.spawn.lat_deg, s.spawn.lon_deg});
  root["initial_speed_mps"] = s.initial_speed_mps;
  root["approach_phase_id"] = s.approach_phase_id;
  ojson drv;
  drv["type"] = driver_name(s.driver);
  if (!s.script.empty() || s.driver == DriverKind::Scripted) {
    drv["script"] = ojson::array();
    for (const auto& [tick, accel] : s.script)
      drv["script"].push_back(ojson::array({tick, accel}));
  }
  root["driver"] = drv;
  root["max_ticks"] = s.max_ticks;
  root["frame_format"] = format_name(s.frame_format);
  return root.dump(2) + "\n";
}

// --- simulation --------------------------------------------------------------

namespace {

ojson recommendation_json(const SpeedRecommendation& r)
{
  ojson j;
  j["kind"] = recommendation_kind(r);
  if (const auto* p = std::get_if<advice::Proceed>(&r)) {
    j["target_mps"] = p->target_mps;
    j["window"] = ojson::array({p->lo_mps, p->hi_mps});
  }
  return j;
}

void validate_setup(const ZoneConfig& cfg, const Scenario& sc, const LinkConfig& link, const AdvisoryParams& params)
{
  if (auto issues = validate_zone_config(cfg); !issues.empty())
    throw ConfigError(std::move(issues));
  if (auto why = link_violation(link))
    throw SimConfigError("link: " + *why);
  if (!(params.min_stop_m > 0.0 && params.min_stop_m < params.max_start_m))
    throw SimConfigError("advisory params: need 0 < min_stop_m < max_start_m");
  if (!(params.v_floor_mps > 0.0) || !(params.green_end_margin_s >= 0.0))
    throw SimConfigError("advisory params: v_floor_mps must be positive and green_end_margin_s non-negative");
  for (const auto& z : cfg.zones)
    if (!(params.v_floor_mps < z.speed_limit_mps))
      throw SimConfigError("advisory params: v_floor_mps must be below every zone speed limit");
  if (!cfg.zone_for_phase(sc.approach_phase_id))
    throw SimConfigError("scenario: no zone serves approach phase " + std::to_string(sc.approach_phase_id));
  if (!(sc.initial_speed_mps >= 0.0) || !std::isfinite(sc.initial_speed_mps))
    throw SimConfigError("scenario: initial_speed_mps must be non-negative");
  if (sc.max_ticks <= 0)
    throw SimConfigError("scenario: max_ticks must be positive");
  if (sc.frame_format == FrameFormat::Unknown)
    throw SimConfigError("scenario: frame_format must be m60 or tw900");
  if (sc.frame_format == FrameFormat::M60Like && cfg.intersection_id > 0xFFFF)
    throw SimConfigError("scenario: m60 frames carry a 16-bit intersection id");
  if (std::abs(sc.spawn.lat_deg - cfg.ref_point.lat_deg) >= 1.0 ||
      std::abs(sc.spawn.lon_deg - cfg.ref_point.lon_deg) >= 1.0)
    throw SimConfigError("scenario: spawn is too far from the intersection");
  for (const auto& [tick, accel] : sc.script)
    if (tick < 0 || !std::isfinite(accel))
      throw SimConfigError("scenario: script entries need tick >= 0 and a finite accel");
}

}  // namespace

Simulation::Simulation(ZoneConfig cfg, Scenario scenario, LinkConfig link, AdvisoryParams params)
    : cfg_(std::move(cfg)),
      scenario_(std::move(scenario)),
      link_cfg_(link),
      params_(params),
      link_(link)
{
  validate_setup(cfg_, scenario_, link_cfg_, params_);
  std::stable_sort(scenario_.script.begin(), scenario_.script.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  ray_ = ApproachRay::between(scenario_.spawn, cfg_.zone_for_phase(scenario_.approach_phase_id)->stopbar,
                              cfg_.ref_point);
  reset();
}

void Simulation::reset()
{
  link_ = BroadcastLink(link_cfg_);
  tick_ = 0;
  next_packet_id_ = 0;
  vehicle_ = VehicleState{scenario_.spawn, scenario_.initial_speed_mps, ray_.length_m};
  gps_zone_.reset();
  obu_state_ = AdvisoryState{};
  obu_zone_.reset();
  last_processed_sent_tick_.reset();
  crossing_tick_.reset();
  finished_ = false;
}

void Simulation::emit(std::vector<SimEvent>& out, EventKind kind, ojson payload) const
{
  out.push_back(SimEvent{tick_, kind, std::move(payload)});
}

void Simulation::record_advisory(const AdvisoryUpdate& upd, std::vector<SimEvent>& out)
{
  obu_state_ = upd.state;
  for (const auto& ev : upd.events) {
    if (const auto* a = std::get_if<event::Activated>(&ev)) {
      emit(out, EventKind::AdvisoryActivated, {{"phase_id", a->phase_id}, {"distance_m", upd.state.distance_m}});
    } else if (const auto* d = std::get_if<event::Deactivated>(&ev)) {
      emit(out, EventKind::AdvisoryDeactivated,
           {{"phase_id", d->phase_id}, {"reason", reason_name(d->reason)}, {"distance_m", upd.state.distance_m}});
    } else if (const auto* p = std::get_if<event::PhaseChanged>(&ev)) {
      emit(out, EventKind::PhaseChanged,
           {{"phase_id", p->phase_id},
            {"from", std::string(1, color_code(p->from))},
            {"to", std::string(1, color_code(p->to))},
            {"beep", p->beep}});
    }
  }
}

void Simulation::obu_leave_zone(const RsuPacket& packet, std::vector<SimEvent>& out)
{
  const auto& zone = *obu_zone_;
  const auto upd = update(obu_state_, packet.snapshot.phase(zone.phase_id), distance_to_stopbar(vehicle_.pos, zone),
                          false, zone.speed_limit_mps, params_);
  record_advisory(upd, out);
  obu_state_ = AdvisoryState{};
  obu_zone_.reset();
}

void Simulation::obu_receive(const RsuPacket& packet, std::vector<SimEvent>& out)
{
  const auto zone = locate(vehicle_.pos, packet.zones, packet.ref_point);
  if (obu_zone_ && (!zone || *zone != *obu_zone_))
    obu_leave_zone(packet, out);

  ojson state;
  state["phase_id"] = 0;
  state["active"] = false;
  if (zone) {
    obu_zone_ = zone;
    // The OBU keeps only its own approach's phase out of the packet.
    const PhaseState& ps = packet.snapshot.phase(zone->phase_id);
    const double d = distance_to_stopbar(vehicle_.pos, *zone);
    const auto upd = update(obu_state_, ps, d, true, zone->speed_limit_mps, params_);
    record_advisory(upd, out);

    state["phase_id"] = ps.phase_id;
    state["active"] = obu_state_.active;
    state["color"] = std::string(1, color_code(ps.color));
    state["countdown_ds"] = obu_state_.countdown_ds;
    state["next1_ds"] = ps.next1_ds;
    state["next2_ds"] = ps.next2_ds;
    state["distance_m"] = d;
    state["speed_limit_mps"] = zone->speed_limit_mps;
    state["controller_time_ds"] = packet.snapshot.controller_time_ds;
    state["seq"] = packet.snapshot.seq;
  }
  state["recommendation"] = recommendation_json(obu_state_.recommendation);
  emit(out, EventKind::AdvisoryState, std::move(state));
}

double Simulation::driver_accel(std::optional<double> external_accel) const
{
  switch (scenario_.driver) {
    case DriverKind::Scripted: {
      double accel = 0.0;
      for (const auto& [tick, a] : scenario_.script) {
        if (tick > tick_)
          break;
        accel = a;
      }
      return accel;
    }
    case DriverKind::AdviceFollower: {
      const auto& rec = obu_state_.recommendation;
      if (const auto* p = std::get_if<advice::Proceed>(&rec))
        return std::clamp(kFollowerGain * (p->target_mps - vehicle_.speed_mps), kMinAccel, kMaxAccel);
      if (std::holds_alternative<advice::PrepareToStop>(rec))
        return vehicle_.speed_mps > 0.0 ? kComfortBrake : 0.0;
      return 0.0;
    }
    case DriverKind::External: return external_accel.value_or(0.0);
  }
  return 0.0;
}

std::vector<SimEvent> Simulation::step(std::optional<double> external_accel)
{
  std::vector<SimEvent> out;
  if (finished_)
    return out;

  // GPS: which zone is the vehicle in right now.
  const auto here = locate(vehicle_.pos, cfg_);
  const std::optional<int> here_id = here ? std::optional<int>(here->phase_id) : std::nullopt;
  if (here_id != gps_zone_) {
    if (gps_zone_)
      emit(out, EventKind::ZoneExited, {{"phase_id", *gps_zone_}});
    if (here_id)
      emit(out, EventKind::ZoneEntered, {{"phase_id", *here_id}});
    gps_zone_ = here_id;
  }

  // Controller -> RSU.
  const SpatSnapshot truth = controller_state(cfg_.plan, tick_, cfg_.intersection_id);
  std::optional<Bytes> frame;
  try {
    frame = encode_frame(scenario_.frame_format, truth);
    emit(out, EventKind::FrameEmitted,
         {{"format", format_name(scenario_.frame_format)}, {"size", frame->size()}, {"hex", to_hex_octets(*frame)}});
  } catch (const CodecError& e) {
    emit(out, EventKind::FrameRejected,
         {{"stage", "encode"}, {"error", errc_name(e.code())}, {"offset", e.offset()}, {"detail", e.what()}});
  }

  if (frame) {
    try {
      RsuPacket packet{decode_frame(*frame), cfg_.ref_point, cfg_.zones, tick_};
      const std::uint64_t id = next_packet_id_++;
      std::string wire = encode_rsu_packet(packet);
      emit(out, EventKind::PacketSent, {{"packet_id", id}, {"seq", packet.snapshot.seq}, {"size", wire.size()}});
      if (link_.submit(id, tick_, std::move(wire)).dropped)
        emit(out, EventKind::PacketDropped, {{"packet_id", id}});
    } catch (const CodecError& e) {
      emit(out, EventKind::FrameRejected,
           {{"stage", "decode"}, {"error", errc_name(e.code())}, {"offset", e.offset()}, {"detail", e.what()}});
    }
  }

  // Link -> OBU -> advisory.
  for (auto& d : link_.collect(tick_)) {
    const RsuPacket packet = parse_rsu_packet(d.payload);
    const bool stale = last_processed_sent_tick_ && packet.sent_tick <= *last_processed_sent_tick_;
    emit(out, EventKind::PacketDelivered,
         {{"packet_id", d.packet_id},
          {"sent_tick", packet.sent_tick},
          {"latency_ticks", tick_ - packet.sent_tick},
          {"stale", stale}});
    if (stale)
      continue;
    last_processed_sent_tick_ = packet.sent_tick;
    obu_receive(packet, out);
  }

  // Driver -> vehicle.
  const double accel = std::clamp(driver_accel(external_accel), kMinAccel, kMaxAccel);
  const Color signal = truth.phase(scenario_.approach_phase_id).color;
  emit(out, EventKind::VehicleState,
       {{"along_m", vehicle_.along_m},
        {"speed_mps", vehicle_.speed_mps},
        {"accel_mps2", accel},
        {"lat", vehicle_.pos.lat_deg},
        {"lon", vehicle_.pos.lon_deg},
        {"signal", std::string(1, color_code(signal))}});
  if (!crossing_tick_ && vehicle_.along_m <= 0.0)
    crossing_tick_ = tick_;
  vehicle_ = step_vehicle(vehicle_, accel, ray_);

  if (crossing_tick_ && tick_ >= *crossing_tick_ + kTicksAfterCrossing) {
    emit(out, EventKind::RunEnded, {{"reason", "crossed"}, {"in_flight", link_.in_flight()}});
    finished_ = true;
  } else if (tick_ + 1 >= scenario_.max_ticks) {
    emit(out, EventKind::RunEnded, {{"reason", "max_ticks"}, {"in_flight", link_.in_flight()}});
    finished_ = true;
  }
  ++tick_;
  return out;
}

std::vector<SimEvent> run_scenario(const ZoneConfig& cfg, const Scenario& scenario, const LinkConfig& link,
                                   const AdvisoryParams& params)
{
  Simulation sim(cfg, scenario, link, params);
  std::vector<SimEvent> log;
  while (!sim.finished()) {
    auto events = sim.step();
    log.insert(log.end(), std::make_move_iterator(events.begin()), std::make_move_iterator(events.end()));
  }
  return log;
}

}  // namespace v2i
