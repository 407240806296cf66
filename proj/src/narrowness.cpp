#include "tagreuse/narrowness.hpp"

#include <cstdint>

#include <fmt/format.h>

namespace tagreuse {

std::string_view to_string(FolksonomyType type) noexcept {
  switch (type) {
    case FolksonomyType::kNarrow:
      return "narrow";
    case FolksonomyType::kMixed:
      return "mixed";
    case FolksonomyType::kBroad:
      return "broad";
  }
  return "unknown";
}

FolksonomyType classify_ratio(double posts_per_resource) noexcept {
  if (posts_per_resource <= kNarrowMaxRatio) return FolksonomyType::kNarrow;
  if (posts_per_resource >= kBroadMinRatio) return FolksonomyType::kBroad;
  return FolksonomyType::kMixed;
}

NarrownessReport narrowness_degree(std::size_t posts, std::size_t resources) {
  if (resources == 0) throw DataError("narrowness of an empty folksonomy is undefined");
  NarrownessReport report;
  report.posts = posts;
  report.resources = resources;
  report.posts_per_resource = static_cast<double>(posts) / static_cast<double>(resources);
  report.type = classify_ratio(report.posts_per_resource);
  return report;
}

NarrownessReport narrowness_degree(const Folksonomy& folksonomy) {
  return narrowness_degree(folksonomy.num_posts(), folksonomy.num_resources());
}

std::string format_ratio(const NarrownessReport& report) {
  if (report.resources == 0) throw DataError("narrowness of an empty folksonomy is undefined");
  const auto milli = static_cast<std::uint64_t>(report.posts) * 1000 / report.resources;
  return fmt::format("{}.{:03}", milli / 1000, milli % 1000);
}

}  // namespace tagreuse
