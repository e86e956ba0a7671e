#pragma once

#include <string>

#include <json.hpp>

#include <mphs/errors.hpp>

namespace mphs::cli {

// Field accessors that turn schema problems into InvalidArgument (exit code 2)
// with the offending key named.

inline const nlohmann::json& require(const nlohmann::json& j, const std::string& key) {
  const auto it = j.find(key);
  if (it == j.end()) throw InvalidArgument("missing required field '" + key + "'");
  return *it;
}

inline double number(const nlohmann::json& j, const std::string& key) {
  const nlohmann::json& v = require(j, key);
  if (!v.is_number()) throw InvalidArgument("field '" + key + "' must be a number");
  return v.get<double>();
}

inline double number_or(const nlohmann::json& j, const std::string& key, double fallback) {
  return j.contains(key) ? number(j, key) : fallback;
}

inline int integer(const nlohmann::json& j, const std::string& key) {
  const nlohmann::json& v = require(j, key);
  if (!v.is_number_integer()) throw InvalidArgument("field '" + key + "' must be an integer");
  return v.get<int>();
}

inline int integer_or(const nlohmann::json& j, const std::string& key, int fallback) {
  return j.contains(key) ? integer(j, key) : fallback;
}

inline std::string string_of(const nlohmann::json& j, const std::string& key) {
  const nlohmann::json& v = require(j, key);
  if (!v.is_string()) throw InvalidArgument("field '" + key + "' must be a string");
  return v.get<std::string>();
}

inline std::string string_or(const nlohmann::json& j, const std::string& key,
                             const std::string& fallback) {
  return j.contains(key) ? string_of(j, key) : fallback;
}

}  // namespace mphs::cli
