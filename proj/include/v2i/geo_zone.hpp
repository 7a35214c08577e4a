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
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "v2i/signal_plan.hpp"

namespace v2i {

inline constexpr double kEarthRadiusM = 6'371'000.0;

struct GeoPoint
{
  double lat_deg = 0.0;
  double lon_deg = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// Metres east (x) and north (y) of a projection origin.
struct LocalPoint
{
  double x = 0.0;
  double y = 0.0;
};

/// Triangular approach zone mapping a patch of road to one signal phase.
struct TriZone
{
  int phase_id = 1;
  std::array<GeoPoint, 3> vertices{};
  GeoPoint stopbar{};
  double speed_limit_mps = 0.0;

  friend bool operator==(const TriZone&, const TriZone&) = default;
};

struct ZoneConfig
{
  std::uint32_t intersection_id = 0;
  GeoPoint ref_point{};
  std::vector<TriZone> zones;
  SignalPlan plan{};

  /// First zone serving phase_id, or nullptr.
  const TriZone* zone_for_phase(int phase_id) const;

  friend bool operator==(const ZoneConfig&, const ZoneConfig&) = default;
};

class GeoError : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
};

/// Equirectangular projection about `origin`. Throws GeoError (OutOfLocalRange)
/// when p is a degree or more away from origin on either axis.
LocalPoint project_local(const GeoPoint& p, const GeoPoint& origin);
/// Analytic inverse of project_local.
GeoPoint unproject_local(const LocalPoint& q, const GeoPoint& origin);

double haversine_m(const GeoPoint& a, const GeoPoint& b);

/// Same-side-of-all-edges test in the plane of `origin`; edges and vertices count as inside.
bool point_in_triangle(const GeoPoint& p, const TriZone& zone, const GeoPoint& origin);

/// Planar area of the zone triangle in m^2.
double triangle_area_m2(const TriZone& zone, const GeoPoint& origin);

/// Containing zone with the lowest phase_id (list order breaks remaining ties).
std::optional<TriZone> locate(const GeoPoint& p, const std::vector<TriZone>& zones, const GeoPoint& origin);
std::optional<TriZone> locate(const GeoPoint& p, const ZoneConfig& cfg);

double distance_to_stopbar(const GeoPoint& p, const TriZone& zone);

/// Point `distance_m` back from the stop bar along the zone's axis
/// (stop bar towards centroid). Used to place vehicles on an approach.
GeoPoint point_on_approach(const TriZone& zone, const GeoPoint& origin, double distance_m);

// --- configuration --------------------------------------------------------

enum class ZoneIssue {
  Collinear,
  Overlap,
  PhaseOutOfRange,
  StopbarOutside,
  BadSpeedLimit,
  CoordinateRange,
  OutOfLocalRange,
  BadPlan,
};

std::string_view issue_name(ZoneIssue issue) noexcept;

struct ValidationIssue
{
  ZoneIssue kind;
  std::optional<std::size_t> zone_index;
  std::string reason;
};

/// Every violated TriZone/ZoneConfig/SignalPlan invariant; empty when valid.
std::vector<ValidationIssue> validate_zone_config(const ZoneConfig& cfg);

class ConfigError : public std::runtime_error
{
 public:
  enum class Kind { Schema, Validation };

  ConfigError(std::string path, const std::string& reason);  // schema
  explicit ConfigError(std::vector<ValidationIssue> issues);  // validation

  Kind kind() const noexcept { return kind_; }
  const std::string& path() const noexcept { return path_; }
  const std::vector<ValidationIssue>& issues() const noexcept { return issues_; }

 private:
  Kind kind_;
  std::string path_;
  std::vector<ValidationIssue> issues_;
};

/// Parses and validates a zone-setup document. Throws ConfigError.
ZoneConfig load_zone_config(std::string_view document);
ZoneConfig load_zone_config_file(const std::string& path);

/// Serialises back to the document schema (version 1).
std::string dump_zone_config(const ZoneConfig& cfg);

}  // namespace v2i
