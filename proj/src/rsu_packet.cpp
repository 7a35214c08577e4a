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
#include "v2i/rsu_packet.hpp"

#include <charconv>

namespace v2i {

namespace {

void append_real(std::string& out, double v)
{
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

std::vector<std::string_view> split(std::string_view text, char sep)
{
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

[[noreturn]] void bad_line(std::size_t line, const std::string& why)
{
  throw CodecError(CodecErrc::MalformedLine, line, why);
}

template <typename T>
T parse_number(std::string_view text, std::size_t line)
{
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
    bad_line(line, "bad number '" + std::string(text) + "'");
  return value;
}

}  // namespace

std::string encode_rsu_packet(const RsuPacket& packet)
{
  std::string out = "RSU|1|" + std::to_string(packet.sent_tick) + "|" + std::to_string(packet.zones.size()) + "\n";
  out += encode_rsu_string(packet.snapshot);
  out += "\nREF|";
  append_real(out, packet.ref_point.lat_deg);
  out += '|';
  append_real(out, packet.ref_point.lon_deg);
  out += '\n';
  for (const auto& z : packet.zones) {
    out += "ZONE|" + std::to_string(z.phase_id);
    for (const auto& v : z.vertices) {
      out += '|';
      append_real(out, v.lat_deg);
      out += '|';
      append_real(out, v.lon_deg);
    }
    out += '|';
    append_real(out, z.stopbar.lat_deg);
    out += '|';
    append_real(out, z.stopbar.lon_deg);
    out += '|';
    append_real(out, z.speed_limit_mps);
    out += '\n';
  }
  return out;
}

RsuPacket parse_rsu_packet(std::string_view text)
{
  auto lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty())
    lines.pop_back();
  if (lines.size() < 3)
    bad_line(lines.size(), "packet needs header, SPAT and REF lines");

  const auto head = split(lines[0], '|');
  if (head.size() != 4 || head[0] != "RSU" || head[1] != "1")
    bad_line(0, "bad packet header");

  RsuPacket p;
  p.sent_tick = parse_number<std::int64_t>(head[2], 0);
  const auto zone_count = parse_number<std::size_t>(head[3], 0);
  if (lines.size() != 3 + zone_count)
    bad_line(lines.size(), "zone count does not match the number of ZONE lines");

  try {
    p.snapshot = parse_rsu_string(lines[1]);
  } catch (const CodecError& e) {
    bad_line(1, e.what());
  }

  const auto ref = split(lines[2], '|');
  if (ref.size() != 3 || ref[0] != "REF")
    bad_line(2, "bad REF line");
  p.ref_point = {parse_number<double>(ref[1], 2), parse_number<double>(ref[2], 2)};

  for (std::size_t i = 0; i < zone_count; ++i) {
    const std::size_t line = 3 + i;
    const auto f = split(lines[line], '|');
    if (f.size() != 11 || f[0] != "ZONE")
      bad_line(line, "bad ZONE line");
    TriZone z;
    z.phase_id = parse_number<int>(f[1], line);
    for (std::size_t k = 0; k < 3; ++k)
      z.vertices[k] = {parse_number<double>(f[2 + 2 * k], line), parse_number<double>(f[3 + 2 * k], line)};
    z.stopbar = {parse_number<double>(f[8], line), parse_number<double>(f[9], line)};
    z.speed_limit_mps = parse_number<double>(f[10], line);
    p.zones.push_back(z);
  }
  return p;
}

}  // namespace v2i
