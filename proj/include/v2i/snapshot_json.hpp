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

#include <string_view>

#include <json.hpp>

#include "v2i/spat_codec.hpp"

namespace v2i {

// Human-readable snapshot form used by the CLI:
// {"intersection_id":42,"controller_time_ds":360000,"seq":0,
//  "phases":[{"phase_id":1,"color":"R","remaining_ds":150,"next1_ds":300,"next2_ds":40}, ...]}

nlohmann::ordered_json snapshot_to_json(const SpatSnapshot& s);

/// Throws CodecError{InvalidSnapshot} on any structural problem.
SpatSnapshot snapshot_from_json(std::string_view document);

/// Whitespace-separated two-digit hex octets. Throws std::invalid_argument
/// ("BadHexDigit ...") on anything else.
Bytes parse_hex_octets(std::string_view text);
std::string to_hex_octets(ByteView bytes);

}  // namespace v2i
