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
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace v2i {

/// Signal indication of one phase. Numeric values match the M60-like status code.
enum class Color : std::uint8_t { Red = 0, Green = 1, Yellow = 2 };

/// Cyclic successor: GREEN -> YELLOW -> RED -> GREEN.
constexpr Color next_color(Color c) noexcept
{
  switch (c) {
    case Color::Green: return Color::Yellow;
    case Color::Yellow: return Color::Red;
    case Color::Red: return Color::Green;
  }
  return Color::Red;
}

/// Single-letter code used on the RSU string and the live protocol ("R", "G", "Y").
char color_code(Color c) noexcept;
std::string_view color_name(Color c) noexcept;

inline constexpr int kPhaseCount = 8;

struct PhaseState
{
  int phase_id = 1;
  Color color = Color::Red;
  std::uint32_t remaining_ds = 0;  ///< deciseconds left in the current color
  std::uint32_t next1_ds = 0;      ///< duration of next(color)
  std::uint32_t next2_ds = 0;      ///< duration of next(next(color))

  friend bool operator==(const PhaseState&, const PhaseState&) = default;
};

/// Decoded signal state of one intersection. phases[i] always carries phase_id i+1.
struct SpatSnapshot
{
  std::uint32_t intersection_id = 0;
  std::uint32_t controller_time_ds = 0;
  std::uint32_t seq = 0;
  std::array<PhaseState, kPhaseCount> phases{};

  const PhaseState& phase(int phase_id) const { return phases.at(static_cast<std::size_t>(phase_id - 1)); }

  friend bool operator==(const SpatSnapshot&, const SpatSnapshot&) = default;
};

/// Snapshot whose phases are numbered 1..8 and otherwise zeroed (all RED).
SpatSnapshot make_snapshot(std::uint32_t intersection_id);

enum class FrameFormat { M60Like, Tw900Like, Unknown };

std::string_view format_name(FrameFormat f) noexcept;

enum class CodecErrc {
  BadMagic,
  BadLength,
  BadVersion,
  BadChecksum,
  BadCrc,
  BadColorCode,
  BadReservedBits,
  BadPhaseCount,
  BadMask,
  FieldOverflow,
  InvalidSnapshot,
  MalformedLine,
};

std::string_view errc_name(CodecErrc e) noexcept;

/// Raised by every decoder and encoder. `offset` is the octet offset for binary
/// frames and the zero-based field index for RSU strings.
class CodecError : public std::runtime_error
{
 public:
  CodecError(CodecErrc code, std::size_t offset, const std::string& detail);

  CodecErrc code() const noexcept { return code_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  CodecErrc code_;
  std::size_t offset_;
};

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

namespace m60 {
inline constexpr std::size_t kFrameSize = 67;
inline constexpr std::uint8_t kMagic0 = 0xA5;
inline constexpr std::uint8_t kMagic1 = 0x60;
inline constexpr std::uint8_t kVersion = 0x01;
inline constexpr std::size_t kRecordOffset = 10;
inline constexpr std::size_t kRecordSize = 7;
inline constexpr std::size_t kChecksumOffset = 66;
}  // namespace m60

namespace tw900 {
inline constexpr std::size_t kFrameSize = 62;
inline constexpr std::uint8_t kMagic0 = 0x90;
inline constexpr std::uint8_t kMagic1 = 0x09;
inline constexpr std::size_t kGreenMask = 9;
inline constexpr std::size_t kYellowMask = 10;
inline constexpr std::size_t kRedMask = 11;
inline constexpr std::size_t kRemaining = 12;
inline constexpr std::size_t kNext1 = 28;
inline constexpr std::size_t kNext2 = 44;
inline constexpr std::size_t kCrcOffset = 60;
}  // namespace tw900

/// CRC-16/CCITT-FALSE: poly 0x1021, init 0xFFFF, no reflection, no final XOR.
std::uint16_t crc16_ccitt_false(ByteView data) noexcept;

/// XOR of all octets.
std::uint8_t xor_checksum(ByteView data) noexcept;

/// Classifies a raw frame by magic and length only; checksums are not looked at.
FrameFormat detect_format(ByteView bytes) noexcept;

/// Throws CodecError. seq is not carried by the format and decodes as 0.
SpatSnapshot decode_m60(ByteView bytes);
/// Throws CodecError. controller_time_ds is not carried by the format and decodes as 0.
SpatSnapshot decode_tw900(ByteView bytes);
/// Dispatches on detect_format(); UNKNOWN frames raise BadMagic or BadLength.
SpatSnapshot decode_frame(ByteView bytes);

/// seq is dropped; intersection_id and every duration must fit in 16 bits.
Bytes encode_m60(const SpatSnapshot& snapshot);
/// controller_time_ds is dropped; seq and every duration must fit in 16 bits.
Bytes encode_tw900(const SpatSnapshot& snapshot);
Bytes encode_frame(FrameFormat format, const SpatSnapshot& snapshot);

/// `SPAT|1|<id>|<time>|<seq>|<p1>|...|<p8>`, each phase `<id>:<R|G|Y>:<rem>:<n1>:<n2>`.
std::string encode_rsu_string(const SpatSnapshot& snapshot);
/// Throws CodecError{MalformedLine, field index}.
SpatSnapshot parse_rsu_string(std::string_view line);

/// Throws InvalidSnapshot when phase ids are not exactly 1..8 in order.
void check_snapshot(const SpatSnapshot& snapshot);

}  // namespace v2i
