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
#include <string>
#include <string_view>
#include <vector>

#include "v2i/geo_zone.hpp"
#include "v2i/spat_codec.hpp"

namespace v2i {

/// Over-the-air unit broadcast by the RSU: one decoded snapshot plus the
/// static approach geometry.
struct RsuPacket
{
  SpatSnapshot snapshot;
  GeoPoint ref_point;
  std::vector<TriZone> zones;
  std::int64_t sent_tick = 0;

  friend bool operator==(const RsuPacket&, const RsuPacket&) = default;
};

/// Newline-separated text packet:
///
///   RSU|1|<sent_tick>|<zone_count>
///   SPAT|1|...                       (encode_rsu_string)
///   REF|<lat>|<lon>
///   ZONE|<phase>|<lat1>|<lon1>|<lat2>|<lon2>|<lat3>|<lon3>|<stop_lat>|<stop_lon>|<limit_mps>
///
/// Reals are written in shortest round-trip form, so parsing is exact.
std::string encode_rsu_packet(const RsuPacket& packet);

/// Throws CodecError{MalformedLine, line index}.
RsuPacket parse_rsu_packet(std::string_view text);

}  // namespace v2i
