#include "popwave/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "popwave/error.hpp"

namespace popwave::cli {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

Json parse_value(const std::string& text) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) return Json(text);
  return j;
}

const char* type_name(const Json& j) {
  if (j.is_null()) return "optional number";
  if (j.is_boolean()) return "boolean";
  if (j.is_number()) return "number";
  if (j.is_string()) return "string";
  if (j.is_array()) return "list of numbers";
  return "object";
}

}  // namespace

UserConfig UserConfig::parse_text(std::string_view text) {
  UserConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      fail(ErrorKind::configuration, "line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty() || value.empty()) {
      fail(ErrorKind::configuration, "line " + std::to_string(lineno) + ": empty key or value");
    }
    if (cfg.values_.contains(key)) {
      fail(ErrorKind::configuration, "line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    cfg.values_[key] = parse_value(value);
  }
  return cfg;
}

UserConfig UserConfig::parse_json(const Json& j) {
  const Json& obj = j.contains("config") ? j.at("config") : j;
  if (!obj.is_object()) fail(ErrorKind::configuration, "JSON config must be an object");
  UserConfig cfg;
  for (const auto& [k, v] : obj.items()) cfg.values_[k] = v;
  return cfg;
}

UserConfig UserConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::configuration, "cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded()) fail(ErrorKind::configuration, "malformed JSON in " + path.string());
    return parse_json(j);
  }
  return parse_text(text);
}

Resolved::Resolved(Json defaults, const UserConfig& user, std::string_view context)
    : values_(std::move(defaults)) {
  for (const auto& [key, value] : user.values().items()) {
    if (!values_.contains(key)) {
      fail(ErrorKind::configuration, "unknown key '" + key + "' for " + std::string(context));
    }
    Json& slot = values_[key];
    const bool ok =
        (slot.is_null() && (value.is_null() || value.is_number() || value == "none")) ||
        (slot.is_boolean() && value.is_boolean()) || (slot.is_number() && value.is_number()) ||
        (slot.is_string() && value.is_string()) ||
        (slot.is_array() && value.is_array() &&
         std::all_of(value.begin(), value.end(), [&](const Json& e) {
           const bool names = slot.empty() || slot.front().is_string();
           return names ? (e.is_string() || e.is_number()) : e.is_number();
         }));
    if (!ok) {
      fail(ErrorKind::configuration, "key '" + key + "' expects a " + type_name(slot) + ", got " +
                                         value.dump());
    }
    if (slot.is_null()) {
      // An optional key stays null in the echo unless a number was given.
      if (value.is_number()) slot = value;
      continue;
    }
    slot = value;
  }
}

const Json& Resolved::at(const std::string& key) const {
  if (!values_.contains(key)) fail(ErrorKind::configuration, "internal: missing config key " + key);
  return values_.at(key);
}

double Resolved::number(const std::string& key) const {
  const Json& j = at(key);
  if (!j.is_number()) fail(ErrorKind::configuration, "key '" + key + "' is not a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(ErrorKind::configuration, "key '" + key + "' must be finite");
  return v;
}

double Resolved::positive(const std::string& key) const {
  const double v = number(key);
  if (!(v > 0.0)) fail(ErrorKind::configuration, "key '" + key + "' must be positive");
  return v;
}

std::int64_t Resolved::integer(const std::string& key) const {
  const double v = number(key);
  if (v != std::floor(v) || std::abs(v) > 9.0e15) {
    fail(ErrorKind::configuration, "key '" + key + "' must be an integer");
  }
  return static_cast<std::int64_t>(v);
}

std::uint64_t Resolved::unsigned_integer(const std::string& key) const {
  const Json& j = at(key);
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  const std::int64_t v = integer(key);
  if (v < 0) fail(ErrorKind::configuration, "key '" + key + "' must be non-negative");
  return static_cast<std::uint64_t>(v);
}

std::string Resolved::string(const std::string& key) const {
  const Json& j = at(key);
  if (!j.is_string()) fail(ErrorKind::configuration, "key '" + key + "' is not a string");
  return j.get<std::string>();
}

bool Resolved::boolean(const std::string& key) const {
  const Json& j = at(key);
  if (!j.is_boolean()) fail(ErrorKind::configuration, "key '" + key + "' is not a boolean");
  return j.get<bool>();
}

std::vector<double> Resolved::list(const std::string& key) const {
  const Json& j = at(key);
  if (!j.is_array()) fail(ErrorKind::configuration, "key '" + key + "' is not a list");
  std::vector<double> out;
  for (const auto& e : j) {
    if (!e.is_number()) fail(ErrorKind::configuration, "key '" + key + "' must list numbers");
    out.push_back(e.get<double>());
    if (!std::isfinite(out.back())) fail(ErrorKind::configuration, "key '" + key + "' must be finite");
  }
  return out;
}

bool Resolved::is_null(const std::string& key) const { return at(key).is_null(); }

void Resolved::set(const std::string& key, Json value) { values_[key] = std::move(value); }

}  // namespace popwave::cli
