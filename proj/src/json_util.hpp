#pragma once

// Internal helpers shared by the JSON document readers.

#include "pfl/errors.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <initializer_list>
#include <string>
#include <string_view>

namespace pfl::detail {

using nlohmann::json;

/// Parses `text`, converting nlohmann's byte offset into line/column.
json parse_json(std::string_view text);

/// Rejects any key of `object` not in `allowed`.
void require_known_keys(const json& object, const std::string& path,
                        std::initializer_list<std::string_view> allowed);

const json& require(const json& object, const std::string& path, const char* key);

double get_number(const json& value, const std::string& path);
std::string get_string(const json& value, const std::string& path);
Eigen::Vector3d get_vector3(const json& value, const std::string& path);

std::string read_file(const std::string& path);

inline std::string child(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

inline std::string element(const std::string& path, std::size_t index) {
  return path + "[" + std::to_string(index) + "]";
}

}  // namespace pfl::detail
