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
#include "v2i/spat_codec.hpp"

#include <charconv>
#include <limits>

namespace v2i {

namespace {

std::string errc_message(CodecErrc code, std::size_t offset, const std::string& detail)
{
  std::string msg(errc_name(code));
  msg += " at ";
  msg += std::to_string(offset);
  if (!detail.empty()) {
    msg += ": ";
    msg += detail;
  }
  return msg;
}

[[noreturn]] void fail(CodecErrc code, std::size_t offset, const std::string& detail = {})
{
  throw CodecError(code, offset, detail);
}

std::uint16_t get_u16_be(ByteView b, std::size_t at)
{
  return static_cast<std::uint16_t>((b[at] << 8) | b[at + 1]);
}

std::uint32_t get_u32_be(ByteView b, std::size_t at)
{
  return (std::uint32_t{b[at]} << 24) | (std::uint32_t{b[at + 1]} << 16) | (std::uint32_t{b[at + 2]} << 8) |
         std::uint32_t{b[at + 3]};
}

std::uint16_t get_u16_le(ByteView b, std::size_t at)
{
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

std::uint32_t get_u32_le(ByteView b, std::size_t at)
{
  return std::uint32_t{b[at]} | (std::uint32_t{b[at + 1]} << 8) | (std::uint32_t{b[at + 2]} << 16) |
         (std::uint32_t{b[at + 3]} << 24);
}

void put_u16_be(Bytes& out, std::size_t at, std::uint16_t v)
{
  out[at] = static_cast<std::uint8_t>(v >> 8);
  out[at + 1] = static_cast<std::uint8_t>(v);
}

void put_u32_be(Bytes& out, std::size_t at, std::uint32_t v)
{
  out[at] = static_cast<std::uint8_t>(v >> 24);
  out[at + 1] = static_cast<std::uint8_t>(v >> 16);
  out[at + 2] = static_cast<std::uint8_t>(v >> 8);
  out[at + 3] = static_cast<std::uint8_t>(v);
}

void put_u16_le(Bytes& out, std::size_t at, std::uint16_t v)
{
  out[at] = static_cast<std::uint8_t>(v);
  out[at + 1] = static_cast<std::uint8_t>(v >> 8);
}

void put_u32_le(Bytes& out, std::size_t at, std::uint32_t v)
{
  out[at] = static_cast<std::uint8_t>(v);
  out[at + 1] = static_cast<std::uint8_t>(v >> 8);
  out[at + 2] = static_cast<std::uint8_t>(v >> 16);
  out[at + 3] = static_cast<std::uint8_t>(v >> 24);
}

std::uint16_t narrow_u16(std::uint32_t v, const char* field)
{
  if (v > std::numeric_limits<std::uint16_t>::max())
    fail(CodecErrc::FieldOverflow, 0, std::string(field) + " = " + std::to_string(v) + " exceeds 65535");
  return static_cast<std::uint16_t>(v);
}

std::uint32_t parse_u32(std::string_view text, std::size_t field)
{
  std::uint32_t value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc{} || ptr != last)
    fail(CodecErrc::MalformedLine, field, "not an unsigned 32-bit integer: '" + std::string(text) + "'");
  return value;
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

}  // namespace

char color_code(Color c) noexcept
{
  switch (c) {
    case Color::Red: return 'R';
    case Color::Green: return 'G';
    case Color::Yellow: return 'Y';
  }
  return '?';
}

std::string_view color_name(Color c) noexcept
{
  switch (c) {
    case Color::Red: return "RED";
    case Color::Green: return "GREEN";
    case Color::Yellow: return "YELLOW";
  }
  return "?";
}

std::string_view format_name(FrameFormat f) noexcept
{
  switch (f) {
    case FrameFormat::M60Like: return "m60";
    case FrameFormat::Tw900Like: return "tw900";
    case FrameFormat::Unknown: return "unknown";
  }
  return "unknown";
}

std::string_view errc_name(CodecErrc e) noexcept
{
  switch (e) {
    case CodecErrc::BadMagic: return "BadMagic";
    case CodecErrc::BadLength: return "BadLength";
    case CodecErrc::BadVersion: return "BadVersion";
    case CodecErrc::BadChecksum: return "BadChecksum";
    case CodecErrc::BadCrc: return "BadCrc";
    case CodecErrc::BadColorCode: return "BadColorCode";
    case CodecErrc::BadReservedBits: return "BadReservedBits";
    case CodecErrc::BadPhaseCount: return "BadPhaseCount";
    case CodecErrc::BadMask: return "BadMask";
    case CodecErrc::FieldOverflow: return "FieldOverflow";
    case CodecErrc::InvalidSnapshot: return "InvalidSnapshot";
    case CodecErrc::MalformedLine: return "MalformedLine";
  }
  return "?";
}

CodecError::CodecError(CodecErrc code, std::size_t offset, const std::string& detail)
    : std::runtime_error(errc_message(code, offset, detail)), code_(code), offset_(offset)
{
}

SpatSnapshot make_snapshot(std::uint32_t intersection_id)
{
  SpatSnapshot s;
  s.intersection_id = intersection_id;
  for (int i = 0; i < kPhaseCount; ++i)
    s.phases[static_cast<std::size_t>(i)].phase_id = i + 1;
  return s;
}

void check_snapshot(const SpatSnapshot& snapshot)
{
  for (int i = 0; i < kPhaseCount; ++i) {
    const auto& p = snapshot.phases[static_cast<std::size_t>(i)];
    if (p.phase_id != i + 1)
      fail(CodecErrc::InvalidSnapshot, static_cast<std::size_t>(i),
           "phase slot " + std::to_string(i) + " holds phase_id " + std::to_string(p.phase_id));
    if (static_cast<std::uint8_t>(p.color) > 2)
      fail(CodecErrc::InvalidSnapshot, static_cast<std::size_t>(i), "color out of range");
  }
}

std::uint16_t crc16_ccitt_false(ByteView data) noexcept
{
  std::uint16_t crc = 0xFFFF;
  for (std::uint8_t byte : data) {
    crc ^= static_cast<std::uint16_t>(byte << 8);
    for (int bit = 0; bit < 8; ++bit)
      crc = (crc & 0x8000) ? static_cast<std::uint16_t>((crc << 1) ^ 0x1021) : static_cast<std::uint16_t>(crc << 1);
  }
  return crc;
}

std::uint8_t xor_checksum(ByteView data) noexcept
{
  std::uint8_t x = 0;
  for (std::uint8_t byte : data)
    x ^= byte;
  return x;
}

FrameFormat detect_format(ByteView bytes) noexcept
{
  if (bytes.size() == m60::kFrameSize && bytes[0] == m60::kMagic0 && bytes[1] == m60::kMagic1)
    return FrameFormat::M60Like;
  if (bytes.size() == tw900::kFrameSize && bytes[0] == tw900::kMagic0 && bytes[1] == tw900::kMagic1)
    return FrameFormat::Tw900Like;
  return FrameFormat::Unknown;
}

// ---------------------------------------------------------------------------
// M60-like: big-endian, one 7-octet record per phase, XOR trailer.
//
//   [0..1] A5 60  [2] version  [3..4] intersection  [5..8] time_ds  [9] count
//   [10 + 7*(i-1)] status | remaining u16 | next1 u16 | next2 u16
//   [66] XOR(0..65)
// ---------------------------------------------------------------------------

SpatSnapshot decode_m60(ByteView bytes)
{
  // Magic before length, so a frame of the other family reads as BadMagic.
  if (!bytes.empty() && bytes[0] != m60::kMagic0)
    fail(CodecErrc::BadMagic, 0);
  if (bytes.size() > 1 && bytes[1] != m60::kMagic1)
    fail(CodecErrc::BadMagic, 1);
  if (bytes.size() != m60::kFrameSize)
    fail(CodecErrc::BadLength, bytes.size(), "expected 67 octets, got " + std::to_string(bytes.size()));

  const std::uint8_t computed = xor_checksum(bytes.first(m60::kChecksumOffset));
  if (computed != bytes[m60::kChecksumOffset])
    fail(CodecErrc::BadChecksum, m60::kChecksumOffset);

  if (bytes[2] != m60::kVersion)
    fail(CodecErrc::BadVersion, 2, "version " + std::to_string(bytes[2]));
  if (bytes[9] != kPhaseCount)
    fail(CodecErrc::BadPhaseCount, 9, "phase_count " + std::to_string(bytes[9]));

  SpatSnapshot s = make_snapshot(get_u16_be(bytes, 3));
  s.controller_time_ds = get_u32_be(bytes, 5);
  s.seq = 0;

  for (std::size_t i = 0; i < kPhaseCount; ++i) {
    const std::size_t at = m60::kRecordOffset + m60::kRecordSize * i;
    const std::uint8_t status = bytes[at];
    if ((status & 0xFC) != 0)
      fail(CodecErrc::BadReservedBits, at);
    if ((status & 0x03) == 3)
      fail(CodecErrc::BadColorCode, at);
    auto& p = s.phases[i];
    p.color = static_cast<Color>(status & 0x03);
    p.remaining_ds = get_u16_be(bytes, at + 1);
    p.next1_ds = get_u16_be(bytes, at + 3);
    p.next2_ds = get_u16_be(bytes, at + 5);
  }
  return s;
}

Bytes encode_m60(const SpatSnapshot& snapshot)
{
  check_snapshot(snapshot);
  Bytes out(m60::kFrameSize, 0);
  out[0] = m60::kMagic0;
  out[1] = m60::kMagic1;
  out[2] = m60::kVersion;
  put_u16_be(out, 3, narrow_u16(snapshot.intersection_id, "intersection_id"));
  put_u32_be(out, 5, snapshot.controller_time_ds);
  out[9] = kPhaseCount;
  for (std::size_t i = 0; i < kPhaseCount; ++i) {
    const auto& p = snapshot.phases[i];
    const std::size_t at = m60::kRecordOffset + m60::kRecordSize * i;
    out[at] = static_cast<std::uint8_t>(p.color);
    put_u16_be(out, at + 1, narrow_u16(p.remaining_ds, "remaining_ds"));
    put_u16_be(out, at + 3, narrow_u16(p.next1_ds, "next1_ds"));
    put_u16_be(out, at + 5, narrow_u16(p.next2_ds, "next2_ds"));
  }
  out[m60::kChecksumOffset] = xor_checksum(ByteView(out).first(m60::kChecksumOffset));
  return out;
}

// ---------------------------------------------------------------------------
// TW900-like: little-endian, one-hot color masks, CRC-16 trailer.
// ---------------------------------------------------------------------------

SpatSnapshot decode_tw900(ByteView bytes)
{
  if (!bytes.empty() && bytes[0] != tw900::kMagic0)
    fail(CodecErrc::BadMagic, 0);
  if (bytes.size() > 1 && bytes[1] != tw900::kMagic1)
    fail(CodecErrc::BadMagic, 1);
  if (bytes.size() != tw900::kFrameSize)
    fail(CodecErrc::BadLength, bytes.size(), "expected 62 octets, got " + std::to_string(bytes.size()));

  const std::uint16_t computed = crc16_ccitt_false(bytes.first(tw900::kCrcOffset));
  if (computed != get_u16_le(bytes, tw900::kCrcOffset))
    fail(CodecErrc::BadCrc, tw900::kCrcOffset);

  if (bytes[2] != tw900::kFrameSize)
    fail(CodecErrc::BadLength, 2, "length octet " + std::to_string(bytes[2]));

  SpatSnapshot s = make_snapshot(get_u32_le(bytes, 3));
  s.seq = get_u16_le(bytes, 7);
  s.controller_time_ds = 0;

  const std::uint8_t green = bytes[tw900::kGreenMask];
  const std::uint8_t yellow = bytes[tw900::kYellowMask];
  const std::uint8_t red = bytes[tw900::kRedMask];
  for (std::size_t i = 0; i < kPhaseCount; ++i) {
    const std::uint8_t bit = static_cast<std::uint8_t>(1u << i);
    const int claims = ((green & bit) != 0) + ((yellow & bit) != 0) + ((red & bit) != 0);
    if (claims != 1)
      fail(CodecErrc::BadMask, tw900::kGreenMask,
           "phase " + std::to_string(i + 1) + " claimed by " + std::to_string(claims) + " masks");
    auto& p = s.phases[i];
    p.color = (green & bit) ? Color::Green : (yellow & bit) ? Color::Yellow : Color::Red;
    p.remaining_ds = get_u16_le(bytes, tw900::kRemaining + 2 * i);
    p.next1_ds = get_u16_le(bytes, tw900::kNext1 + 2 * i);
    p.next2_ds = get_u16_le(bytes, tw900::kNext2 + 2 * i);
  }
  return s;
}

Bytes encode_tw900(const SpatSnapshot& snapshot)
{
  check_snapshot(snapshot);
  Bytes out(tw900::kFrameSize, 0);
  out[0] = tw900::kMagic0;
  out[1] = tw900::kMagic1;
  out[2] = static_cast<std::uint8_t>(tw900::kFrameSize);
  put_u32_le(out, 3, snapshot.intersection_id);
  put_u16_le(out, 7, narrow_u16(snapshot.seq, "seq"));
  for (std::size_t i = 0; i < kPhaseCount; ++i) {
    const auto& p = snapshot.phases[i];
    const std::uint8_t bit = static_cast<std::uint8_t>(1u << i);
    switch (p.color) {
      case Color::Green: out[tw900::kGreenMask] |= bit; break;
      case Color::Yellow: out[tw900::kYellowMask] |= bit; break;
      case Color::Red: out[tw900::kRedMask] |= bit; break;
    }
    put_u16_le(out, tw900::kRemaining + 2 * i, narrow_u16(p.remaining_ds, "remaining_ds"));
    put_u16_le(out, tw900::kNext1 + 2 * i, narrow_u16(p.next1_ds, "next1_ds"));
    put_u16_le(out, tw900::kNext2 + 2 * i, narrow_u16(p.next2_ds, "next2_ds"));
  }
  put_u16_le(out, tw900::kCrcOffset, crc16_ccitt_false(ByteView(out).first(tw900::kCrcOffset)));
  return out;
}

SpatSnapshot decode_frame(ByteView bytes)
{
  switch (detect_format(bytes)) {
    case FrameFormat::M60Like: return decode_m60(bytes);
    case FrameFormat::Tw900Like: return decode_tw900(bytes);
    case FrameFormat::Unknown: break;
  }
  if (bytes.size() < 2)
    fail(CodecErrc::BadLength, bytes.size(), "frame too short to carry a magic");
  if ((bytes[0] == m60::kMagic0 && bytes[1] == m60::kMagic1) ||
      (bytes[0] == tw900::kMagic0 && bytes[1] == tw900::kMagic1))
    fail(CodecErrc::BadLength, bytes.size(), "length does not match the format named by the magic");
  fail(CodecErrc::BadMagic, 0, "no known controller magic");
}

Bytes encode_frame(FrameFormat format, const SpatSnapshot& snapshot)
{
  switch (format) {
    case FrameFormat::M60Like: return encode_m60(snapshot);
    case FrameFormat::Tw900Like: return encode_tw900(snapshot);
    case FrameFormat::Unknown: break;
  }
  throw std::invalid_argument("encode_frame: unknown format");
}

// ---------------------------------------------------------------------------
// RSU string
// ---------------------------------------------------------------------------

namespace {
constexpr std::size_t kRsuHeaderFields = 5;
constexpr std::size_t kRsuFields = kRsuHeaderFields + kPhaseCount;
}  // namespace

std::string encode_rsu_string(const SpatSnapshot& snapshot)
{
  check_snapshot(snapshot);
  std::string line = "SPAT|1|";
  line += std::to_string(snapshot.intersection_id);
  line += '|';
  line += std::to_string(snapshot.controller_time_ds);
  line += '|';
  line += std::to_string(snapshot.seq);
  for (const auto& p : snapshot.phases) {
    line += '|';
    line += std::to_string(p.phase_id);
    line += ':';
    line += color_code(p.color);
    line += ':';
    line += std::to_string(p.remaining_ds);
    line += ':';
    line += std::to_string(p.next1_ds);
    line += ':';
    line += std::to_string(p.next2_ds);
  }
  return line;
}

SpatSnapshot parse_rsu_string(std::string_view line)
{
  const auto fields = split(line, '|');
  if (fields.size() != kRsuFields)
    fail(CodecErrc::MalformedLine, std::min(fields.size(), kRsuFields),
         "expected " + std::to_string(kRsuFields) + " fields, got " + std::to_string(fields.size()));
  if (fields[0] != "SPAT")
    fail(CodecErrc::MalformedLine, 0, "missing SPAT tag");
  if (fields[1] != "1")
    fail(CodecErrc::MalformedLine, 1, "unsupported version '" + std::string(fields[1]) + "'");

  SpatSnapshot s = make_snapshot(parse_u32(fields[2], 2));
  s.controller_time_ds = parse_u32(fields[3], 3);
  s.seq = parse_u32(fields[4], 4);

  for (std::size_t i = 0; i < kPhaseCount; ++i) {
    const std::size_t field = kRsuHeaderFields + i;
    const auto parts = split(fields[field], ':');
    if (parts.size() != 5)
      fail(CodecErrc::MalformedLine, field, "phase entry needs 5 ':'-separated parts");
    if (parse_u32(parts[0], field) != i + 1)
      fail(CodecErrc::MalformedLine, field, "phase entries must appear as 1..8 in order");
    auto& p = s.phases[i];
    if (parts[1] == "R")
      p.color = Color::Red;
    else if (parts[1] == "G")
      p.color = Color::Green;
    else if (parts[1] == "Y")
      p.color = Color::Yellow;
    else
      fail(CodecErrc::MalformedLine, field, "unknown color code '" + std::string(parts[1]) + "'");
    p.remaining_ds = parse_u32(parts[2], field);
    p.next1_ds = parse_u32(parts[3], field);
    p.next2_ds = parse_u32(parts[4], field);
  }
  return s;
}

}  // namespace v2i
