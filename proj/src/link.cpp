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
#include "v2i/link.hpp"

namespace v2i {

std::optional<std::string> link_violation(const LinkConfig& link)
{
  if (!(link.drop_prob >= 0.0 && link.drop_prob <= 1.0))
    return "drop_prob must lie in [0, 1]";
  if (link.latency_min_ticks < 0 || link.latency_max_ticks < 0)
    return "latency ticks must be non-negative";
  if (link.latency_min_ticks > link.latency_max_ticks)
    return "latency_min_ticks must not exceed latency_max_ticks";
  return std::nullopt;
}

BroadcastLink::BroadcastLink(const LinkConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {}

BroadcastLink::Outcome BroadcastLink::submit(std::uint64_t packet_id, std::int64_t tick, std::string payload)
{
  const double drop_draw = SplitMix64::to_unit(rng_.next());
  const std::uint64_t latency_draw = rng_.next();

  if (drop_draw < cfg_.drop_prob)
    return {true, 0};

  const auto span = static_cast<std::uint64_t>(cfg_.latency_max_ticks - cfg_.latency_min_ticks) + 1;
  const std::int64_t deliver = tick + cfg_.latency_min_ticks + static_cast<std::int64_t>(latency_draw % span);
  queue_.emplace(std::make_pair(deliver, packet_id), Delivery{packet_id, tick, std::move(payload)});
  return {false, deliver};
}

std::vector<BroadcastLink::Delivery> BroadcastLink::collect(std::int64_t tick)
{
  std::vector<Delivery> due;
  auto it = queue_.begin();
  while (it != queue_.end() && it->first.first <= tick) {
    due.push_back(std::move(it->second));
    it = queue_.erase(it);
  }
  return due;
}

}  // namespace v2i
