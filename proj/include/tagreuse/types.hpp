#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace tagreuse {

// Interned identifiers. Values index the owning Folksonomy's vocabularies.
enum class UserId : std::uint32_t {};
enum class ResourceId : std::uint32_t {};
enum class TagId : std::uint32_t {};

template <typename Id>
  requires std::is_enum_v<Id>
constexpr std::size_t index_of(Id id) noexcept {
  return static_cast<std::size_t>(static_cast<std::underlying_type_t<Id>>(id));
}

template <typename Id>
  requires std::is_enum_v<Id>
constexpr Id id_at(std::size_t index) noexcept {
  return static_cast<Id>(static_cast<std::underlying_type_t<Id>>(index));
}

// Seconds since the Unix epoch.
using Timestamp = std::int64_t;

inline constexpr double kSecondsPerDay = 86400.0;

// Input data is malformed or unusable (bad lines, empty datasets, too little
// data for a fit).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line), detail_(what) {}
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : DataError(source + ":" + std::to_string(line) + ": " + what), line_(line), detail_(what) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t line_;
  std::string detail_;
};

// A caller passed an out-of-contract parameter.
class ParamError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace tagreuse
