#pragma once

// Helpers shared by the JSON spec readers (internal).

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

#include "bachlab/error.hpp"

namespace bachlab::detail {

using json = nlohmann::json;

inline void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw SpecError(where + " must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw SpecError("unknown field '" + it.key() + "' in " + where);
  }
}

inline double num(const json& p, const char* key, double def) {
  if (!p.contains(key)) return def;
  if (!p[key].is_number()) throw SpecError(std::string("parameter '") + key + "' must be a number");
  return p[key].get<double>();
}

inline std::string str(const json& p, const char* key, const std::string& def) {
  if (!p.contains(key)) return def;
  if (!p[key].is_string()) throw SpecError(std::string("parameter '") + key + "' must be a string");
  return p[key].get<std::string>();
}

inline json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError(what + " is not valid JSON: " + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace bachlab::detail
