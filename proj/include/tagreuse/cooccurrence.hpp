#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tagreuse/folksonomy.hpp"

namespace tagreuse {

struct TagCount {
  TagId tag{};
  std::uint32_t count = 0;

  bool operator==(const TagCount&) const = default;
};

// Sparse symmetric tag co-occurrence counts: cooc(a, b) is the number of posts
// carrying both a and b. The diagonal is not stored.
class CoocMatrix {
 public:
  CoocMatrix() = default;
  explicit CoocMatrix(const Folksonomy& train);

  std::uint32_t count(TagId a, TagId b) const;
  // Neighbours of a, ascending by tag id.
  std::span<const TagCount> row(TagId a) const;
  std::size_t tag_space() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  // Number of distinct unordered pairs stored.
  std::size_t num_pairs() const noexcept { return entries_.size() / 2; }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<TagCount> entries_;
};

inline CoocMatrix build_cooccurrence(const Folksonomy& train) { return CoocMatrix(train); }

// Tag assignments on `resource` by users other than `user`, counted across
// posts and sorted by tag id. Empty for an unseen resource.
std::vector<TagCount> resource_context(const Folksonomy& train, ResourceId resource,
                                       UserId user);

}  // namespace tagreuse
