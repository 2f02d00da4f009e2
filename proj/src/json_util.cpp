#include "json_util.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace pfl::detail {

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // nlohmann reports the byte index of the last read character (1-based).
    const std::size_t offset = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < offset; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError("JSON syntax error", line, column);
  }
}

void require_known_keys(const json& object, const std::string& path,
                        std::initializer_list<std::string_view> allowed) {
  if (!object.is_object()) {
    throw ValidationError(path.empty() ? "<root>" : path, "expected an object");
  }
  for (const auto& [key, value] : object.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ValidationError(child(path, key), "unknown key");
    }
  }
}

const json& require(const json& object, const std::string& path, const char* key) {
  auto it = object.find(key);
  if (it == object.end()) {
    throw ValidationError(child(path, key), "missing required key");
  }
  return *it;
}

double get_number(const json& value, const std::string& path) {
  if (!value.is_number()) {
    throw ValidationError(path, "expected a number");
  }
  return value.get<double>();
}

std::string get_string(const json& value, const std::string& path) {
  if (!value.is_string()) {
    throw ValidationError(path, "expected a string");
  }
  return value.get<std::string>();
}

Eigen::Vector3d get_vector3(const json& value, const std::string& path) {
  if (!value.is_array() || value.size() != 3) {
    throw ValidationError(path, "expected an array of 3 numbers");
  }
  Eigen::Vector3d v;
  for (std::size_t i = 0; i < 3; ++i) {
    v[static_cast<Eigen::Index>(i)] = get_number(value[i], element(path, i));
  }
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace pfl::detail
