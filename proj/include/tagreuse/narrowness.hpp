#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "tagreuse/folksonomy.hpp"

namespace tagreuse {

enum class FolksonomyType { kNarrow, kMixed, kBroad };

std::string_view to_string(FolksonomyType type) noexcept;

// Average posts per resource and the folksonomy type it implies.
struct NarrownessReport {
  std::size_t posts = 0;
  std::size_t resources = 0;
  double posts_per_resource = 0.0;
  FolksonomyType type = FolksonomyType::kNarrow;
};

inline constexpr double kNarrowMaxRatio = 1.05;
inline constexpr double kBroadMinRatio = 2.0;

FolksonomyType classify_ratio(double posts_per_resource) noexcept;

// Throws DataError when resources == 0.
NarrownessReport narrowness_degree(std::size_t posts, std::size_t resources);
NarrownessReport narrowness_degree(const Folksonomy& folksonomy);

// posts/resources cut (not rounded) to three decimals, e.g. "5.674".
std::string format_ratio(const NarrownessReport& report);

}  // namespace tagreuse
