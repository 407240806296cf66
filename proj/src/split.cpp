#include "tagreuse/split.hpp"

#include <array>
#include <cstdint>
#include <cstdio>

namespace tagreuse {

ChronoSplit chronological_split(const Folksonomy& folksonomy) {
  std::vector<Post> train;
  std::vector<Post> test;
  train.reserve(folksonomy.num_posts());
  for (std::size_t u = 0; u < folksonomy.user_space(); ++u) {
    auto posts = folksonomy.posts_of(id_at<UserId>(u));
    if (posts.empty()) continue;
    if (posts.size() == 1) {
      train.push_back(posts.front());
      continue;
    }
    train.insert(train.end(), posts.begin(), posts.end() - 1);
    test.push_back(posts.back());
  }
  return ChronoSplit{Folksonomy(folksonomy.shared_vocab(), std::move(train)), std::move(test)};
}

namespace {

class Fnv1a {
 public:
  void add(std::string_view bytes) {
    for (unsigned char c : bytes) {
      hash_ ^= c;
      hash_ *= 0x100000001b3ULL;
    }
  }
  void add(std::uint64_t value) {
    std::array<char, 8> bytes{};
    for (std::size_t i = 0; i < 8; ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
    add(std::string_view(bytes.data(), bytes.size()));
  }
  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

void add_post(Fnv1a& h, const Folksonomy& names, const Post& post) {
  h.add(names.user_name(post.user));
  h.add(std::string_view("\t"));
  h.add(names.resource_name(post.resource));
  h.add(static_cast<std::uint64_t>(post.timestamp));
  for (TagId t : post.tags) {
    h.add(names.tag_name(t));
    h.add(std::string_view(","));
  }
  h.add(std::string_view("\n"));
}

}  // namespace

std::string split_fingerprint(const ChronoSplit& split) {
  Fnv1a h;
  for (const auto& post : split.train.posts()) add_post(h, split.train, post);
  h.add(std::string_view("--test--\n"));
  for (const auto& post : split.test) add_post(h, split.train, post);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h.value()));
  return buf;
}

}  // namespace tagreuse
