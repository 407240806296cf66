#include "tagreuse/cooccurrence.hpp"

#include <algorithm>
#include <unordered_map>

namespace tagreuse {

CoocMatrix::CoocMatrix(const Folksonomy& train) {
  const std::size_t n = train.tag_space();
  std::unordered_map<std::uint64_t, std::uint32_t> pairs;
  for (const auto& post : train.posts()) {
    const auto& tags = post.tags;
    for (std::size_t i = 0; i < tags.size(); ++i) {
      for (std::size_t j = i + 1; j < tags.size(); ++j) {
        const std::uint64_t key = (static_cast<std::uint64_t>(index_of(tags[i])) << 32) |
                                  static_cast<std::uint64_t>(index_of(tags[j]));
        ++pairs[key];
      }
    }
  }

  offsets_.assign(n + 1, 0);
  for (const auto& [key, count] : pairs) {
    ++offsets_[(key >> 32) + 1];
    ++offsets_[(key & 0xffffffffULL) + 1];
  }
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];

  entries_.resize(offsets_.back());
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [key, count] : pairs) {
    const std::size_t a = key >> 32;
    const std::size_t b = key & 0xffffffffULL;
    entries_[cursor[a]++] = TagCount{id_at<TagId>(b), count};
    entries_[cursor[b]++] = TagCount{id_at<TagId>(a), count};
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(entries_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
              entries_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]),
              [](const TagCount& x, const TagCount& y) { return x.tag < y.tag; });
  }
}

std::span<const TagCount> CoocMatrix::row(TagId a) const {
  const std::size_t i = index_of(a);
  if (i >= tag_space()) return {};
  return std::span<const TagCount>(entries_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
}

std::uint32_t CoocMatrix::count(TagId a, TagId b) const {
  auto r = row(a);
  auto it = std::lower_bound(r.begin(), r.end(), b,
                             [](const TagCount& e, TagId t) { return e.tag < t; });
  if (it == r.end() || it->tag != b) return 0;
  return it->count;
}

std::vector<TagCount> resource_context(const Folksonomy& train, ResourceId resource,
                                       UserId user) {
  std::unordered_map<std::size_t, std::uint32_t> counts;
  const auto posts = train.posts();
  for (std::uint32_t p : train.posts_on(resource)) {
    const Post& post = posts[p];
    if (post.user == user) continue;
    for (TagId t : post.tags) ++counts[index_of(t)];
  }
  std::vector<TagCount> out;
  out.reserve(counts.size());
  for (const auto& [tag, count] : counts) out.push_back(TagCount{id_at<TagId>(tag), count});
  std::sort(out.begin(), out.end(),
            [](const TagCount& x, const TagCount& y) { return x.tag < y.tag; });
  return out;
}

}  // namespace tagreuse
