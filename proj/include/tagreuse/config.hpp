#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tagreuse {

// Flat dotted-key settings, e.g. "bll.d" -> "0.5".
//
// Files use a TOML-like subset: `key = value` lines, `#` comments, and
// `[section]` headers that prefix following keys with "section.". Values may
// be wrapped in double quotes.
class Config {
 public:
  Config() = default;

  static Config parse(std::istream& in);
  static Config load(const std::filesystem::path& path);

  void set(std::string key, std::string value);
  // Accepts "key=value"; throws ParamError otherwise.
  void set_assignment(std::string_view assignment);
  // Values from `other` win.
  void merge(const Config& other);

  bool contains(std::string_view key) const;
  std::optional<std::string> get(std::string_view key) const;

  std::string get_string(std::string_view key, std::string fallback) const;
  double get_double(std::string_view key, double fallback) const;
  std::int64_t get_int(std::string_view key, std::int64_t fallback) const;
  std::uint64_t get_uint(std::string_view key, std::uint64_t fallback) const;
  bool get_bool(std::string_view key, bool fallback) const;

  const std::map<std::string, std::string, std::less<>>& entries() const noexcept {
    return entries_;
  }

 private:
  std::map<std::string, std::string, std::less<>> entries_;
};

// "a, b,c" -> {"a", "b", "c"}; empty items dropped.
std::vector<std::string> split_list(std::string_view text);

}  // namespace tagreuse
