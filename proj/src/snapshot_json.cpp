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
#include "v2i/snapshot_json.hpp"

#include <cctype>
#include <stdexcept>
#include <string>

#include "json_strict.hpp"

namespace v2i {

nlohmann::ordered_json snapshot_to_json(const SpatSnapshot& s)
{
  nlohmann::ordered_json j;
  j["intersection_id"] = s.intersection_id;
  j["controller_time_ds"] = s.controller_time_ds;
  j["seq"] = s.seq;
  j["phases"] = nlohmann::ordered_json::array();
  for (const auto& p : s.phases) {
    nlohmann::ordered_json jp;
    jp["phase_id"] = p.phase_id;
    jp["color"] = std::string(1, color_code(p.color));
    jp["remaining_ds"] = p.remaining_ds;
    jp["next1_ds"] = p.next1_ds;
    jp["next2_ds"] = p.next2_ds;
    j["phases"].push_back(jp);
  }
  return j;
}

namespace {

std::uint32_t read_u32(const nlohmann::json& j, const std::string& path)
{
  const auto v = detail::read_int(j, path);
  if (v < 0 || v > 0xFFFFFFFFLL)
    detail::schema_fail(path, "must fit an unsigned 32-bit integer");
  return static_cast<std::uint32_t>(v);
}

}  // namespace

SpatSnapshot snapshot_from_json(std::string_view document)
{
  try {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(document);
    } catch (const nlohmann::json::parse_error& e) {
      detail::schema_fail("", std::string("not valid JSON: ") + e.what());
    }
    detail::expect_keys(j, "", {"intersection_id", "controller_time_ds", "seq", "phases"});
    SpatSnapshot s = make_snapshot(read_u32(j["intersection_id"], "/intersection_id"));
    s.controller_time_ds = read_u32(j["controller_time_ds"], "/controller_time_ds");
    s.seq = read_u32(j["seq"], "/seq");
    const auto& phases = j["phases"];
    if (!phases.is_array() || phases.size() != kPhaseCount)
      detail::schema_fail("/phases", "expected exactly 8 phases");
    for (std::size_t i = 0; i < kPhaseCount; ++i) {
      const std::string at = "/phases/" + std::to_string(i);
      detail::expect_keys(phases[i], at, {"phase_id", "color", "remaining_ds", "next1_ds", "next2_ds"});
      auto& p = s.phases[i];
      if (detail::read_int(phases[i]["phase_id"], at + "/phase_id") != static_cast<std::int64_t>(i + 1))
        detail::schema_fail(at + "/phase_id", "phases must be listed 1..8 in order");
      const auto c = detail::read_string(phases[i]["color"], at + "/color");
      if (c == "R")
        p.color = Color::Red;
      else if (c == "G")
        p.color = Color::Green;
      else if (c == "Y")
        p.color = Color::Yellow;
      else
        detail::schema_fail(at + "/color", "expected R, G or Y");
      p.remaining_ds = read_u32(phases[i]["remaining_ds"], at + "/remaining_ds");
      p.next1_ds = read_u32(phases[i]["next1_ds"], at + "/next1_ds");
      p.next2_ds = read_u32(phases[i]["next2_ds"], at + "/next2_ds");
    }
    return s;
  } catch (const detail::SchemaViolation& v) {
    throw CodecError(CodecErrc::InvalidSnapshot, 0, v.path + ": " + v.reason);
  }
}

Bytes parse_hex_octets(std::string_view text)
{
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9')
      return c - '0';
    if (c >= 'a' && c <= 'f')
      return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
      return c - 'A' + 10;
    return -1;
  };
  Bytes out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])))
      ++j;
    const auto token = text.substr(i, j - i);
    if (token.size() != 2 || nibble(token[0]) < 0 || nibble(token[1]) < 0)
      throw std::invalid_argument("BadHexDigit: '" + std::string(token) + "' at octet " + std::to_string(out.size()));
    out.push_back(static_cast<std::uint8_t>(nibble(token[0]) * 16 + nibble(token[1])));
    i = j;
  }
  return out;
}

std::string to_hex_octets(ByteView bytes)
{
  static constexpr char kDigits[] = "0123456789ABCDEF";
  std::string out;
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    if (i)
      out += ' ';
    out += kDigits[bytes[i] >> 4];
    out += kDigits[bytes[i] & 0x0F];
  }
  return out;
}

}  // namespace v2i
