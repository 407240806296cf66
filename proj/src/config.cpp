#include "tagreuse/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>

#include "tagreuse/folksonomy.hpp"
#include "tagreuse/types.hpp"

namespace tagreuse {
namespace {

std::string unquote(std::string value) {
  if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
    return value.substr(1, value.size() - 2);
  }
  return value;
}

template <typename T>
T parse_number(std::string_view key, const std::string& text) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last) {
    throw ParamError("config key '" + std::string(key) + "': cannot parse '" + text + "'");
  }
  return value;
}

}  // namespace

Config Config::parse(std::istream& in) {
  Config config;
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::string text = trim(line);
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw ParseError(line_no, "unterminated section header");
      section = trim(std::string_view(text).substr(1, text.size() - 2));
      continue;
    }
    auto eq = text.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected key = value");
    std::string key = trim(std::string_view(text).substr(0, eq));
    std::string value = unquote(trim(std::string_view(text).substr(eq + 1)));
    if (key.empty()) throw ParseError(line_no, "empty key");
    config.set(section.empty() ? key : section + "." + key, std::move(value));
  }
  return config;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config '" + path.string() + "'");
  try {
    return parse(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string(), e.line(), e.detail());
  }
}

void Config::set(std::string key, std::string value) {
  entries_.insert_or_assign(std::move(key), std::move(value));
}

void Config::set_assignment(std::string_view assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ParamError("expected key=value, got '" + std::string(assignment) + "'");
  }
  set(trim(assignment.substr(0, eq)), unquote(trim(assignment.substr(eq + 1))));
}

void Config::merge(const Config& other) {
  for (const auto& [key, value] : other.entries_) set(key, value);
}

bool Config::contains(std::string_view key) const { return entries_.find(key) != entries_.end(); }

std::optional<std::string> Config::get(std::string_view key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string Config::get_string(std::string_view key, std::string fallback) const {
  auto value = get(key);
  return value ? *value : std::move(fallback);
}

double Config::get_double(std::string_view key, double fallback) const {
  auto value = get(key);
  return value ? parse_number<double>(key, *value) : fallback;
}

std::int64_t Config::get_int(std::string_view key, std::int64_t fallback) const {
  auto value = get(key);
  return value ? parse_number<std::int64_t>(key, *value) : fallback;
}

std::uint64_t Config::get_uint(std::string_view key, std::uint64_t fallback) const {
  auto value = get(key);
  return value ? parse_number<std::uint64_t>(key, *value) : fallback;
}

bool Config::get_bool(std::string_view key, bool fallback) const {
  auto value = get(key);
  if (!value) return fallback;
  if (*value == "true" || *value == "1" || *value == "yes") return true;
  if (*value == "false" || *value == "0" || *value == "no") return false;
  throw ParamError("config key '" + std::string(key) + "': expected a boolean, got '" + *value +
                   "'");
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    std::size_t end = text.find(',', begin);
    if (end == std::string_view::npos) end = text.size();
    std::string item = trim(text.substr(begin, end - begin));
    if (!item.empty()) out.push_back(std::move(item));
    begin = end + 1;
  }
  return out;
}

}  // namespace tagreuse
