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

// Strict readers for the config documents: every object has a closed key set
// and every error carries a JSON-pointer-like path.

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <string>

#include <json.hpp>

#include "v2i/geo_zone.hpp"

namespace v2i::detail {

struct SchemaViolation
{
  std::string path;
  std::string reason;
};

[[noreturn]] inline void schema_fail(const std::string& path, const std::string& reason)
{
  throw SchemaViolation{path, reason};
}

inline void expect_keys(const nlohmann::json& j, const std::string& path, std::initializer_list<const char*> required,
                        std::initializer_list<const char*> optional = {})
{
  if (!j.is_object())
    schema_fail(path, "expected an object");
  for (const char* k : required)
    if (!j.contains(k))
      schema_fail(path + "/" + k, "missing field");
  auto known = [&](const std::string& k) {
    auto eq = [&](const char* want) { return k == want; };
    return std::any_of(required.begin(), required.end(), eq) || std::any_of(optional.begin(), optional.end(), eq);
  };
  for (const auto& [k, _] : j.items())
    if (!known(k))
      schema_fail(path + "/" + k, "unknown field");
}

inline std::int64_t read_int(const nlohmann::json& j, const std::string& path)
{
  if (!j.is_number_integer())
    schema_fail(path, "expected an integer");
  return j.get<std::int64_t>();
}

inline double read_real(const nlohmann::json& j, const std::string& path)
{
  if (!j.is_number())
    schema_fail(path, "expected a number");
  return j.get<double>();
}

inline std::string read_string(const nlohmann::json& j, const std::string& path)
{
  if (!j.is_string())
    schema_fail(path, "expected a string");
  return j.get<std::string>();
}

inline GeoPoint read_pair(const nlohmann::json& j, const std::string& path)
{
  if (!j.is_array() || j.size() != 2)
    schema_fail(path, "expected [lat, lon]");
  return {read_real(j[0], path + "/0"), read_real(j[1], path + "/1")};
}

}  // namespace v2i::detail
