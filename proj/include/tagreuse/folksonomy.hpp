#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tagreuse/types.hpp"

namespace tagreuse {

// Interned string table. Ids are dense indices into names().
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> names);

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(std::size_t index) const { return names_.at(index); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::optional<std::size_t> find(std::string_view name) const;

  bool operator==(const Vocabulary& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> lookup_;
};

struct Vocabularies {
  Vocabulary users;
  Vocabulary resources;
  Vocabulary tags;

  bool operator==(const Vocabularies&) const = default;
};

// One tagging event. Tags are sorted ascending and unique.
struct Post {
  UserId user{};
  ResourceId resource{};
  std::vector<TagId> tags;
  Timestamp timestamp = 0;

  bool operator==(const Post&) const = default;
};

// A post by name, before interning.
struct PostRecord {
  std::string user;
  std::string resource;
  Timestamp timestamp = 0;
  std::vector<std::string> tags;
};

// Immutable, indexed collection of posts.
//
// Posts are held grouped by user and ordered by timestamp; posts with equal
// timestamps keep their construction order. At most one post exists per
// (user, resource) pair: later duplicates replace earlier ones, where "later"
// means larger timestamp, or equal timestamp and later in input order.
//
// Several folksonomies may share one Vocabularies instance (a chronological
// split does this so that train and test ids agree). The id spaces are then
// larger than the num_*() counts, which only count ids that occur in posts.
class Folksonomy {
 public:
  Folksonomy() = default;

  // Interns names into lexicographically sorted vocabularies, so ids are
  // canonical for a given post set.
  static Folksonomy from_records(std::vector<PostRecord> records);

  Folksonomy(std::shared_ptr<const Vocabularies> vocab, std::vector<Post> posts);

  std::span<const Post> posts() const noexcept { return posts_; }
  std::span<const Post> posts_of(UserId user) const;
  // Indices into posts() of every post on the resource.
  std::span<const std::uint32_t> posts_on(ResourceId resource) const;

  std::size_t num_posts() const noexcept { return posts_.size(); }
  std::size_t num_users() const noexcept { return num_users_; }
  std::size_t num_resources() const noexcept { return num_resources_; }
  std::size_t num_tags() const noexcept { return num_tags_; }
  std::size_t num_tag_assignments() const noexcept { return num_assignments_; }
  bool empty() const noexcept { return posts_.empty(); }

  const Vocabularies& vocab() const noexcept { return *vocab_; }
  std::shared_ptr<const Vocabularies> shared_vocab() const noexcept { return vocab_; }
  std::size_t user_space() const noexcept { return vocab_->users.size(); }
  std::size_t resource_space() const noexcept { return vocab_->resources.size(); }
  std::size_t tag_space() const noexcept { return vocab_->tags.size(); }

  // Tag ids that occur in at least one post, ascending.
  std::vector<TagId> used_tags() const;

  const std::string& user_name(UserId id) const { return vocab_->users.name(index_of(id)); }
  const std::string& resource_name(ResourceId id) const {
    return vocab_->resources.name(index_of(id));
  }
  const std::string& tag_name(TagId id) const { return vocab_->tags.name(index_of(id)); }

  std::optional<UserId> find_user(std::string_view name) const;
  std::optional<ResourceId> find_resource(std::string_view name) const;
  std::optional<TagId> find_tag(std::string_view name) const;

  bool operator==(const Folksonomy& other) const;

 private:
  std::shared_ptr<const Vocabularies> vocab_ = std::make_shared<Vocabularies>();
  std::vector<Post> posts_;
  std::vector<std::size_t> user_offsets_;
  std::vector<std::size_t> resource_offsets_;
  std::vector<std::uint32_t> resource_posts_;
  std::size_t num_users_ = 0;
  std::size_t num_resources_ = 0;
  std::size_t num_tags_ = 0;
  std::size_t num_assignments_ = 0;
};

// Lower-cases ASCII letters and trims surrounding whitespace.
std::string normalize_tag(std::string_view raw);
std::string trim(std::string_view raw);

}  // namespace tagreuse
