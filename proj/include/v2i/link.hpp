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
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace v2i {

/// splitmix64 (Steele, Lea, Flood). Fixed so "random" loss reproduces across builds.
class SplitMix64
{
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept
  {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Top 53 bits mapped onto [0, 1).
  static double to_unit(std::uint64_t draw) noexcept { return static_cast<double>(draw >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// One tick = 0.1 s.
struct LinkConfig
{
  double drop_prob = 0.0;
  std::int64_t latency_min_ticks = 0;
  std::int64_t latency_max_ticks = 0;
  std::uint64_t seed = 0;
};

/// Empty when valid.
std::optional<std::string> link_violation(const LinkConfig& link);

/// Lossy broadcast channel. Every submitted packet consumes exactly two draws,
/// drop first and latency second, whether or not it is dropped.
class BroadcastLink
{
 public:
  struct Outcome
  {
    bool dropped;
    std::int64_t deliver_tick;  ///< meaningful only when !dropped
  };

  struct Delivery
  {
    std::uint64_t packet_id;
    std::int64_t sent_tick;
    std::string payload;
  };

  explicit BroadcastLink(const LinkConfig& cfg);

  Outcome submit(std::uint64_t packet_id, std::int64_t tick, std::string payload);

  /// Packets due at or before `tick`, ordered by (deliver_tick, packet_id).
  std::vector<Delivery> collect(std::int64_t tick);

  std::size_t in_flight() const noexcept { return queue_.size(); }

 private:
  LinkConfig cfg_;
  SplitMix64 rng_;
  std::map<std::pair<std::int64_t, std::uint64_t>, Delivery> queue_;
};

}  // namespace v2i
