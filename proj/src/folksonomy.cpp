#include "tagreuse/folksonomy.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <set>
#include <utility>

namespace tagreuse {

Vocabulary::Vocabulary(std::vector<std::string> names) : names_(std::move(names)) {
  lookup_.reserve(names_.size());
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!lookup_.emplace(names_[i], i).second) {
      throw ParamError("duplicate vocabulary entry '" + names_[i] + "'");
    }
  }
}

std::optional<std::size_t> Vocabulary::find(std::string_view name) const {
  auto it = lookup_.find(std::string(name));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::string trim(std::string_view raw) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  std::size_t begin = 0;
  std::size_t end = raw.size();
  while (begin < end && is_space(static_cast<unsigned char>(raw[begin]))) ++begin;
  while (end > begin && is_space(static_cast<unsigned char>(raw[end - 1]))) --end;
  return std::string(raw.substr(begin, end - begin));
}

std::string normalize_tag(std::string_view raw) {
  std::string out = trim(raw);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

namespace {

Vocabulary sorted_vocabulary(const std::set<std::string>& names) {
  return Vocabulary(std::vector<std::string>(names.begin(), names.end()));
}

}  // namespace

Folksonomy Folksonomy::from_records(std::vector<PostRecord> records) {
  std::set<std::string> users;
  std::set<std::string> resources;
  std::set<std::string> tags;
  for (const auto& rec : records) {
    users.insert(rec.user);
    resources.insert(rec.resource);
    tags.insert(rec.tags.begin(), rec.tags.end());
  }

  // Names that only appear in posts dropped by deduplication would inflate the
  // vocabularies, so resolve duplicates before interning.
  std::map<std::pair<std::string, std::string>, std::size_t> latest;
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto key = std::make_pair(records[i].user, records[i].resource);
    auto [it, inserted] = latest.emplace(key, i);
    if (!inserted && records[i].timestamp >= records[it->second].timestamp) it->second = i;
  }
  if (latest.size() != records.size()) {
    std::vector<bool> keep(records.size(), false);
    for (const auto& [key, i] : latest) keep[i] = true;
    std::vector<PostRecord> kept;
    kept.reserve(latest.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (keep[i]) kept.push_back(std::move(records[i]));
    }
    records = std::move(kept);
    users.clear();
    resources.clear();
    tags.clear();
    for (const auto& rec : records) {
      users.insert(rec.user);
      resources.insert(rec.resource);
      tags.insert(rec.tags.begin(), rec.tags.end());
    }
  }

  auto vocab = std::make_shared<Vocabularies>();
  vocab->users = sorted_vocabulary(users);
  vocab->resources = sorted_vocabulary(resources);
  vocab->tags = sorted_vocabulary(tags);

  std::vector<Post> posts;
  posts.reserve(records.size());
  for (const auto& rec : records) {
    Post post;
    post.user = id_at<UserId>(*vocab->users.find(rec.user));
    post.resource = id_at<ResourceId>(*vocab->resources.find(rec.resource));
    post.timestamp = rec.timestamp;
    post.tags.reserve(rec.tags.size());
    for (const auto& tag : rec.tags) post.tags.push_back(id_at<TagId>(*vocab->tags.find(tag)));
    posts.push_back(std::move(post));
  }
  return Folksonomy(std::move(vocab), std::move(posts));
}

Folksonomy::Folksonomy(std::shared_ptr<const Vocabularies> vocab, std::vector<Post> posts)
    : vocab_(std::move(vocab)) {
  if (!vocab_) throw ParamError("folksonomy requires a vocabulary");
  const std::size_t n_users = vocab_->users.size();
  const std::size_t n_resources = vocab_->resources.size();
  const std::size_t n_tags = vocab_->tags.size();

  for (auto& post : posts) {
    if (index_of(post.user) >= n_users || index_of(post.resource) >= n_resources) {
      throw ParamError("post references an id outside the vocabulary");
    }
    if (post.timestamp < 0) throw DataError("negative timestamp");
    std::sort(post.tags.begin(), post.tags.end());
    post.tags.erase(std::unique(post.tags.begin(), post.tags.end()), post.tags.end());
    if (post.tags.empty()) throw DataError("post without tags");
    if (index_of(post.tags.back()) >= n_tags) {
      throw ParamError("post references a tag outside the vocabulary");
    }
  }

  // Stable ordering by (user, timestamp) keeps input order among ties, which
  // both the duplicate rule and the split tie rule rely on.
  std::vector<std::size_t> order(posts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (posts[a].user != posts[b].user) return posts[a].user < posts[b].user;
    return posts[a].timestamp < posts[b].timestamp;
  });

  // Within a user, the last occurrence of a resource in this order is the one
  // to keep.
  std::vector<bool> keep(posts.size(), true);
  {
    std::size_t begin = 0;
    std::unordered_map<std::uint32_t, std::size_t> seen;
    while (begin < order.size()) {
      std::size_t end = begin;
      seen.clear();
      while (end < order.size() && posts[order[end]].user == posts[order[begin]].user) {
        auto r = static_cast<std::uint32_t>(index_of(posts[order[end]].resource));
        auto [it, inserted] = seen.emplace(r, end);
        if (!inserted) {
          keep[it->second] = false;
          it->second = end;
        }
        ++end;
      }
      begin = end;
    }
  }

  posts_.reserve(posts.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (keep[i]) posts_.push_back(std::move(posts[order[i]]));
  }

  user_offsets_.assign(n_users + 1, 0);
  resource_offsets_.assign(n_resources + 1, 0);
  std::vector<bool> tag_seen(n_tags, false);
  for (const auto& post : posts_) {
    ++user_offsets_[index_of(post.user) + 1];
    ++resource_offsets_[index_of(post.resource) + 1];
    num_assignments_ += post.tags.size();
    for (TagId t : post.tags) tag_seen[index_of(t)] = true;
  }
  for (std::size_t i = 0; i < n_users; ++i) {
    if (user_offsets_[i + 1] > 0) ++num_users_;
    user_offsets_[i + 1] += user_offsets_[i];
  }
  for (std::size_t i = 0; i < n_resources; ++i) {
    if (resource_offsets_[i + 1] > 0) ++num_resources_;
    resource_offsets_[i + 1] += resource_offsets_[i];
  }
  num_tags_ = static_cast<std::size_t>(std::count(tag_seen.begin(), tag_seen.end(), true));

  resource_posts_.resize(posts_.size());
  std::vector<std::size_t> cursor(resource_offsets_.begin(), resource_offsets_.end() - 1);
  for (std::size_t i = 0; i < posts_.size(); ++i) {
    resource_posts_[cursor[index_of(posts_[i].resource)]++] = static_cast<std::uint32_t>(i);
  }
}

std::span<const Post> Folksonomy::posts_of(UserId user) const {
  const std::size_t u = index_of(user);
  if (u >= user_space()) return {};
  return std::span<const Post>(posts_).subspan(user_offsets_[u],
                                               user_offsets_[u + 1] - user_offsets_[u]);
}

std::span<const std::uint32_t> Folksonomy::posts_on(ResourceId resource) const {
  const std::size_t r = index_of(resource);
  if (r >= resource_space()) return {};
  return std::span<const std::uint32_t>(resource_posts_)
      .subspan(resource_offsets_[r], resource_offsets_[r + 1] - resource_offsets_[r]);
}

std::vector<TagId> Folksonomy::used_tags() const {
  std::vector<bool> seen(tag_space(), false);
  for (const auto& post : posts_) {
    for (TagId t : post.tags) seen[index_of(t)] = true;
  }
  std::vector<TagId> out;
  out.reserve(num_tags_);
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (seen[i]) out.push_back(id_at<TagId>(i));
  }
  return out;
}

std::optional<UserId> Folksonomy::find_user(std::string_view name) const {
  if (auto i = vocab_->users.find(name)) return id_at<UserId>(*i);
  return std::nullopt;
}

std::optional<ResourceId> Folksonomy::find_resource(std::string_view name) const {
  if (auto i = vocab_->resources.find(name)) return id_at<ResourceId>(*i);
  return std::nullopt;
}

std::optional<TagId> Folksonomy::find_tag(std::string_view name) const {
  if (auto i = vocab_->tags.find(name)) return id_at<TagId>(*i);
  return std::nullopt;
}

bool Folksonomy::operator==(const Folksonomy& other) const {
  return *vocab_ == *other.vocab_ && posts_ == other.posts_;
}

}  // namespace tagreuse
