#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace popwave::cli {

using Json = nlohmann::ordered_json;

/// User-supplied key/value pairs, in file order.
///
/// Text form: one `key = value` per line, `#` starts a comment, values are JSON scalars or
/// bracketed lists (`alpha = [0, 1, -1]`); anything that is not valid JSON is taken as a bare
/// string (`bc = fixed`). A file whose first non-blank character is `{` is read as JSON: either
/// a flat object or a run artifact carrying a "config" object, which makes every output JSON a
/// valid input.
class UserConfig {
 public:
  UserConfig() = default;
  static UserConfig parse_text(std::string_view text);
  static UserConfig parse_json(const Json& j);
  static UserConfig load(const std::filesystem::path& path);

  const Json& values() const noexcept { return values_; }
  bool contains(const std::string& key) const { return values_.contains(key); }
  void set(const std::string& key, Json value) { values_[key] = std::move(value); }

 private:
  Json values_ = Json::object();
};

/// Defaults merged with user values. Every key the user gives must exist in the defaults and
/// match its type; a null default means "optional number". The full object is echoed into
/// every output artifact.
class Resolved {
 public:
  Resolved(Json defaults, const UserConfig& user, std::string_view context);

  const Json& json() const noexcept { return values_; }

  double number(const std::string& key) const;
  /// Number that must be > 0 (tolerances, steps, widths).
  double positive(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  std::uint64_t unsigned_integer(const std::string& key) const;
  std::string string(const std::string& key) const;
  bool boolean(const std::string& key) const;
  std::vector<double> list(const std::string& key) const;
  bool is_null(const std::string& key) const;
  /// Replaces a value after resolution (e.g. an "auto" default made concrete), keeping the echo honest.
  void set(const std::string& key, Json value);

 private:
  const Json& at(const std::string& key) const;
  Json values_;
};

}  // namespace popwave::cli
