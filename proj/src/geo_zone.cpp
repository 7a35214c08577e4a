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
#include "v2i/geo_zone.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "json_strict.hpp"

namespace v2i {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double cross(const LocalPoint& o, const LocalPoint& a, const LocalPoint& b)
{
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

std::array<LocalPoint, 3> project_triangle(const TriZone& zone, const GeoPoint& origin)
{
  return {project_local(zone.vertices[0], origin), project_local(zone.vertices[1], origin),
          project_local(zone.vertices[2], origin)};
}

bool inside_planar(const LocalPoint& p, const std::array<LocalPoint, 3>& t)
{
  const double d1 = cross(t[0], t[1], p);
  const double d2 = cross(t[1], t[2], p);
  const double d3 = cross(t[2], t[0], p);
  const bool has_neg = d1 < 0 || d2 < 0 || d3 < 0;
  const bool has_pos = d1 > 0 || d2 > 0 || d3 > 0;
  return !(has_neg && has_pos);
}

bool strictly_inside_planar(const LocalPoint& p, const std::array<LocalPoint, 3>& t)
{
  const double d1 = cross(t[0], t[1], p);
  const double d2 = cross(t[1], t[2], p);
  const double d3 = cross(t[2], t[0], p);
  return (d1 > 0 && d2 > 0 && d3 > 0) || (d1 < 0 && d2 < 0 && d3 < 0);
}

// Interior lattice points (i, j, k > 0, i + j + k = 16) of a triangle: 105 samples.
std::vector<LocalPoint> interior_samples(const std::array<LocalPoint, 3>& t)
{
  constexpr int n = 16;
  std::vector<LocalPoint> out;
  for (int i = 1; i < n; ++i) {
    for (int j = 1; i + j < n; ++j) {
      const double a = static_cast<double>(i) / n;
      const double b = static_cast<double>(j) / n;
      const double c = 1.0 - a - b;
      out.push_back({a * t[0].x + b * t[1].x + c * t[2].x, a * t[0].y + b * t[1].y + c * t[2].y});
    }
  }
  return out;
}

bool zones_overlap(const std::array<LocalPoint, 3>& a, const std::array<LocalPoint, 3>& b)
{
  for (const auto& v : a)
    if (strictly_inside_planar(v, b))
      return true;
  for (const auto& v : b)
    if (strictly_inside_planar(v, a))
      return true;
  for (const auto& p : interior_samples(a))
    if (inside_planar(p, b))
      return true;
  for (const auto& p : interior_samples(b))
    if (inside_planar(p, a))
      return true;
  return false;
}

bool in_range(const GeoPoint& p)
{
  return p.lat_deg >= -90.0 && p.lat_deg <= 90.0 && p.lon_deg >= -180.0 && p.lon_deg < 180.0;
}

bool in_local_range(const GeoPoint& p, const GeoPoint& origin)
{
  return std::abs(p.lat_deg - origin.lat_deg) < 1.0 && std::abs(p.lon_deg - origin.lon_deg) < 1.0;
}

// --- document readers ---------------------------------------------------

using nlohmann::json;
using detail::expect_keys;
using detail::read_int;
using detail::read_pair;
using detail::read_real;
using detail::schema_fail;

GeoPoint read_latlon_object(const json& j, const std::string& path)
{
  expect_keys(j, path, {"lat", "lon"});
  return {read_real(j["lat"], path + "/lat"), read_real(j["lon"], path + "/lon")};
}

SignalPlan read_plan(const json& j, const std::string& path, std::vector<ValidationIssue>& issues)
{
  expect_keys(j, path, {"cycle_ds", "phases"});
  SignalPlan plan;
  plan.cycle_ds = read_int(j["cycle_ds"], path + "/cycle_ds");
  const json& phases = j["phases"];
  if (!phases.is_array())
    schema_fail(path + "/phases", "expected an array");

  std::array<bool, kPhaseCount> seen{};
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const std::string at = path + "/phases/" + std::to_string(i);
    expect_keys(phases[i], at, {"phase_id", "offset_ds", "green_ds", "yellow_ds"});
    const auto id = read_int(phases[i]["phase_id"], at + "/phase_id");
    PhaseTiming t{read_int(phases[i]["offset_ds"], at + "/offset_ds"), read_int(phases[i]["green_ds"], at + "/green_ds"),
                  read_int(phases[i]["yellow_ds"], at + "/yellow_ds")};
    if (id < 1 || id > kPhaseCount) {
      issues.push_back({ZoneIssue::BadPlan, std::nullopt, "plan phase_id " + std::to_string(id) + " outside 1..8"});
      continue;
    }
    auto slot = static_cast<std::size_t>(id - 1);
    if (seen[slot]) {
      issues.push_back({ZoneIssue::BadPlan, std::nullopt, "plan lists phase " + std::to_string(id) + " twice"});
      continue;
    }
    seen[slot] = true;
    plan.phases[slot] = t;
  }
  for (std::size_t i = 0; i < kPhaseCount; ++i)
    if (!seen[i])
      issues.push_back({ZoneIssue::BadPlan, std::nullopt, "plan has no timing for phase " + std::to_string(i + 1)});
  return plan;
}

nlohmann::ordered_json point_pair(const GeoPoint& p)
{
  return nlohmann::ordered_json::array({p.lat_deg, p.lon_deg});
}

}  // namespace

const TriZone* ZoneConfig::zone_for_phase(int phase_id) const
{
  for (const auto& z : zones)
    if (z.phase_id == phase_id)
      return &z;
  return nullptr;
}

LocalPoint project_local(const GeoPoint& p, const GeoPoint& origin)
{
  if (!in_local_range(p, origin))
    throw GeoError("OutOfLocalRange: point is a degree or more from the projection origin");
  return {kEarthRadiusM * (p.lon_deg - origin.lon_deg) * kDegToRad * std::cos(origin.lat_deg * kDegToRad),
          kEarthRadiusM * (p.lat_deg - origin.lat_deg) * kDegToRad};
}

GeoPoint unproject_local(const LocalPoint& q, const GeoPoint& origin)
{
  return {origin.lat_deg + q.y / kEarthRadiusM / kDegToRad,
          origin.lon_deg + q.x / (kEarthRadiusM * std::cos(origin.lat_deg * kDegToRad)) / kDegToRad};
}

double haversine_m(const GeoPoint& a, const GeoPoint& b)
{
  const double phi1 = a.lat_deg * kDegToRad;
  const double phi2 = b.lat_deg * kDegToRad;
  const double s_lat = std::sin((phi2 - phi1) / 2.0);
  const double s_lon = std::sin((b.lon_deg - a.lon_deg) * kDegToRad / 2.0);
  const double h = std::min(1.0, s_lat * s_lat + std::cos(phi1) * std::cos(phi2) * s_lon * s_lon);
  return 2.0 * kEarthRadiusM * std::asin(std::sqrt(h));
}

bool point_in_triangle(const GeoPoint& p, const TriZone& zone, const GeoPoint& origin)
{
  if (!in_local_range(p, origin))
    return false;
  return inside_planar(project_local(p, origin), project_triangle(zone, origin));
}

double triangle_area_m2(const TriZone& zone, const GeoPoint& origin)
{
  const auto t = project_triangle(zone, origin);
  return std::abs(cross(t[0], t[1], t[2])) / 2.0;
}

std::optional<TriZone> locate(const GeoPoint& p, const std::vector<TriZone>& zones, const GeoPoint& origin)
{
  const TriZone* best = nullptr;
  for (const auto& z : zones) {
    if (best && z.phase_id >= best->phase_id)
      continue;
    if (point_in_triangle(p, z, origin))
      best = &z;
  }
  if (!best)
    return std::nullopt;
  return *best;
}

std::optional<TriZone> locate(const GeoPoint& p, const ZoneConfig& cfg)
{
  return locate(p, cfg.zones, cfg.ref_point);
}

double distance_to_stopbar(const GeoPoint& p, const TriZone& zone)
{
  return haversine_m(p, zone.stopbar);
}

GeoPoint point_on_approach(const TriZone& zone, const GeoPoint& origin, double distance_m)
{
  const auto t = project_triangle(zone, origin);
  const LocalPoint stop = project_local(zone.stopbar, origin);
  const LocalPoint centroid{(t[0].x + t[1].x + t[2].x) / 3.0, (t[0].y + t[1].y + t[2].y) / 3.0};
  const double dx = centroid.x - stop.x;
  const double dy = centroid.y - stop.y;
  const double len = std::hypot(dx, dy);
  if (len == 0.0)
    throw GeoError("zone axis is degenerate: stop bar coincides with the centroid");
  return unproject_local({stop.x + dx / len * distance_m, stop.y + dy / len * distance_m}, origin);
}

// --- configuration --------------------------------------------------------

std::string_view issue_name(ZoneIssue issue) noexcept
{
  switch (issue) {
    case ZoneIssue::Collinear: return "collinear";
    case ZoneIssue::Overlap: return "overlap";
    case ZoneIssue::PhaseOutOfRange: return "phase out of range";
    case ZoneIssue::StopbarOutside: return "stopbar outside triangle";
    case ZoneIssue::BadSpeedLimit: return "bad speed limit";
    case ZoneIssue::CoordinateRange: return "coordinate out of range";
    case ZoneIssue::OutOfLocalRange: return "out of local range";
    case ZoneIssue::BadPlan: return "bad plan";
  }
  return "?";
}

namespace {
std::string validation_message(const std::vector<ValidationIssue>& issues)
{
  std::ostringstream os;
  os << "ValidationError";
  if (!issues.empty()) {
    const auto& first = issues.front();
    if (first.zone_index)
      os << " (zone " << *first.zone_index << ")";
    os << ": " << issue_name(first.kind) << ": " << first.reason;
    if (issues.size() > 1)
      os << " (+" << issues.size() - 1 << " more)";
  }
  return os.str();
}
}  // namespace

ConfigError::ConfigError(std::string path, const std::string& reason)
    : std::runtime_error("SchemaError at " + path + ": " + reason), kind_(Kind::Schema), path_(std::move(path))
{
}

ConfigError::ConfigError(std::vector<ValidationIssue> issues)
    : std::runtime_error(validation_message(issues)), kind_(Kind::Validation), issues_(std::move(issues))
{
}

std::vector<ValidationIssue> validate_zone_config(const ZoneConfig& cfg)
{
  std::vector<ValidationIssue> issues;
  if (!in_range(cfg.ref_point))
    issues.push_back({ZoneIssue::CoordinateRange, std::nullopt, "ref_point outside lat [-90,90] / lon [-180,180)"});

  // Geometry of a zone is only trusted for pairwise checks when it is usable on its own.
  std::vector<std::optional<std::array<LocalPoint, 3>>> planar(cfg.zones.size());

  for (std::size_t i = 0; i < cfg.zones.size(); ++i) {
    const auto& z = cfg.zones[i];
    if (z.phase_id < 1 || z.phase_id > kPhaseCount)
      issues.push_back({ZoneIssue::PhaseOutOfRange, i, "phase_id " + std::to_string(z.phase_id) + " outside 1..8"});
    if (!(z.speed_limit_mps > 0.0) || !std::isfinite(z.speed_limit_mps))
      issues.push_back({ZoneIssue::BadSpeedLimit, i, "speed_limit_mps must be a positive number"});

    bool coords_ok = true;
    for (const auto& v : z.vertices) {
      if (!in_range(v)) {
        issues.push_back({ZoneIssue::CoordinateRange, i, "vertex outside lat/lon range"});
        coords_ok = false;
      } else if (!in_local_range(v, cfg.ref_point)) {
        issues.push_back({ZoneIssue::OutOfLocalRange, i, "vertex a degree or more from ref_point"});
        coords_ok = false;
      }
    }
    if (!in_range(z.stopbar) || !in_local_range(z.stopbar, cfg.ref_point)) {
      issues.push_back({ZoneIssue::CoordinateRange, i, "stopbar outside the usable coordinate range"});
      coords_ok = false;
    }
    if (!coords_ok)
      continue;

    const double area = triangle_area_m2(z, cfg.ref_point);
    if (!(area > 1.0)) {
      issues.push_back({ZoneIssue::Collinear, i, "triangle area " + std::to_string(area) + " m^2 is not above 1 m^2"});
      continue;
    }
    if (!point_in_triangle(z.stopbar, z, cfg.ref_point))
      issues.push_back({ZoneIssue::StopbarOutside, i, "stopbar does not lie inside or on the triangle"});
    planar[i] = project_triangle(z, cfg.ref_point);
  }

  for (std::size_t i = 0; i < planar.size(); ++i) {
    for (std::size_t j = i + 1; j < planar.size(); ++j) {
      if (planar[i] && planar[j] && zones_overlap(*planar[i], *planar[j]))
        issues.push_back({ZoneIssue::Overlap, j, "zone " + std::to_string(j) + " overlaps zone " + std::to_string(i)});
    }
  }

  if (auto why = plan_violation(cfg.plan))
    issues.push_back({ZoneIssue::BadPlan, std::nullopt, *why});
  return issues;
}

namespace {

ZoneConfig load_zone_config_impl(std::string_view document)
{
  json root;
  try {
    root = json::parse(document);
  } catch (const json::parse_error& e) {
    schema_fail("", std::string("not valid JSON: ") + e.what());
  }

  expect_keys(root, "", {"version", "intersection_id", "ref_point", "zones", "plan"});
  if (read_int(root["version"], "/version") != 1)
    schema_fail("/version", "only version 1 is supported");

  ZoneConfig cfg;
  const auto id = read_int(root["intersection_id"], "/intersection_id");
  if (id < 0 || id > 0xFFFFFFFFLL)
    schema_fail("/intersection_id", "must be a non-negative 32-bit integer");
  cfg.intersection_id = static_cast<std::uint32_t>(id);
  cfg.ref_point = read_latlon_object(root["ref_point"], "/ref_point");

  const json& zones = root["zones"];
  if (!zones.is_array())
    schema_fail("/zones", "expected an array");
  for (std::size_t i = 0; i < zones.size(); ++i) {
    const std::string at = "/zones/" + std::to_string(i);
    expect_keys(zones[i], at, {"phase_id", "vertices", "stopbar", "speed_limit_mps"});
    TriZone z;
    const auto pid = read_int(zones[i]["phase_id"], at + "/phase_id");
    z.phase_id = static_cast<int>(std::clamp<std::int64_t>(pid, -1, 1000));
    const json& verts = zones[i]["vertices"];
    if (!verts.is_array() || verts.size() != 3)
      schema_fail(at + "/vertices", "expected exactly three [lat, lon] pairs");
    for (std::size_t k = 0; k < 3; ++k)
      z.vertices[k] = read_pair(verts[k], at + "/vertices/" + std::to_string(k));
    z.stopbar = read_pair(zones[i]["stopbar"], at + "/stopbar");
    z.speed_limit_mps = read_real(zones[i]["speed_limit_mps"], at + "/speed_limit_mps");
    cfg.zones.push_back(z);
  }

  std::vector<ValidationIssue> issues;
  cfg.plan = read_plan(root["plan"], "/plan", issues);
  auto more = validate_zone_config(cfg);
  if (!issues.empty()) {
    // plan_violation() already ran against a partially filled plan; its verdict is noise here.
    std::erase_if(more, [](const ValidationIssue& v) { return v.kind == ZoneIssue::BadPlan; });
  }
  issues.insert(issues.end(), more.begin(), more.end());
  if (!issues.empty())
    throw ConfigError(std::move(issues));
  return cfg;
}

}  // namespace

ZoneConfig load_zone_config(std::string_view document)
{
  try {
    return load_zone_config_impl(document);
  } catch (const detail::SchemaViolation& v) {
    throw ConfigError(v.path, v.reason);
  }
}

ZoneConfig load_zone_config_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError("", "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_zone_config(buf.str());
}

std::string dump_zone_config(const ZoneConfig& cfg)
{
  nlohmann::ordered_json root;
  root["version"] = 1;
  root["intersection_id"] = cfg.intersection_id;
  root["ref_point"] = {{"lat", cfg.ref_point.lat_deg}, {"lon", cfg.ref_point.lon_deg}};
  root["zones"] = nlohmann::ordered_json::array();
  for (const auto& z : cfg.zones) {
    nlohmann::ordered_json jz;
    jz["phase_id"] = z.phase_id;
    jz["vertices"] = {point_pair(z.vertices[0]), point_pair(z.vertices[1]), point_pair(z.vertices[2])};
    jz["stopbar"] = point_pair(z.stopbar);
    jz["speed_limit_mps"] = z.speed_limit_mps;
    root["zones"].push_back(jz);
  }
  nlohmann::ordered_json plan;
  plan["cycle_ds"] = cfg.plan.cycle_ds;
  plan["phases"] = nlohmann::ordered_json::array();
  for (int id = 1; id <= kPhaseCount; ++id) {
    const auto& t = cfg.plan.timing(id);
    plan["phases"].push_back(
        {{"phase_id", id}, {"offset_ds", t.offset_ds}, {"green_ds", t.green_ds}, {"yellow_ds", t.yellow_ds}});
  }
  root["plan"] = plan;
  return root.dump(2) + "\n";
}

}  // namespace v2i
