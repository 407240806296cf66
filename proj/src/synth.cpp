#include "tagreuse/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <fmt/format.h>

namespace tagreuse {

void SynthParams::validate() const {
  if (users < 1) throw ParamError("synth: need at least one user");
  if (posts_per_user < 1) throw ParamError("synth: need at least one post per user");
  if (tags < 1) throw ParamError("synth: tag vocabulary must not be empty");
  if (topics < 1 || topics > tags) throw ParamError("synth: topics must lie in 1..tags");
  if (min_tags_per_post < 1 || max_tags_per_post < min_tags_per_post) {
    throw ParamError("synth: need 1 <= min_tags <= max_tags");
  }
  if (max_tags_per_post > tags / topics) {
    throw ParamError("synth: max_tags exceeds the tags available in one topic");
  }
  if (resource_core_tags < 1) throw ParamError("synth: resources need at least one core tag");
  if (!(reuse_decay >= 0.0)) throw ParamError("synth: reuse decay must be >= 0");
  if (!(novelty > 0.0)) throw ParamError("synth: novelty must be > 0");
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!unit(context_strength)) throw ParamError("synth: context strength must lie in [0, 1]");
  if (!unit(sharing_rate) || sharing_rate >= 1.0) {
    throw ParamError("synth: sharing rate must lie in [0, 1)");
  }
  if (!unit(topic_drift)) throw ParamError("synth: drift must lie in [0, 1]");
  if (!(mean_gap_days > 0.0)) throw ParamError("synth: mean gap must be > 0");
  if (start_time < 0) throw ParamError("synth: start time must be >= 0");
}

SynthParams SynthParams::from_config(const Config& config) {
  SynthParams p;
  auto size = [&](const char* key, std::size_t fallback) {
    const auto v = config.get_int(key, static_cast<std::int64_t>(fallback));
    if (v < 0) throw ParamError(std::string("synth: ") + key + " must be >= 0");
    return static_cast<std::size_t>(v);
  };
  p.users = size("synth.users", p.users);
  p.posts_per_user = size("synth.posts_per_user", p.posts_per_user);
  p.tags = size("synth.tags", p.tags);
  p.topics = size("synth.topics", p.topics);
  p.min_tags_per_post = size("synth.min_tags", p.min_tags_per_post);
  p.max_tags_per_post = size("synth.max_tags", p.max_tags_per_post);
  p.resource_core_tags = size("synth.core_tags", p.resource_core_tags);
  p.reuse_decay = config.get_double("synth.d", p.reuse_decay);
  p.novelty = config.get_double("synth.novelty", p.novelty);
  p.context_strength = config.get_double("synth.context", p.context_strength);
  p.sharing_rate = config.get_double("synth.sharing", p.sharing_rate);
  p.topic_drift = config.get_double("synth.drift", p.topic_drift);
  p.mean_gap_days = config.get_double("synth.gap_days", p.mean_gap_days);
  p.start_time = config.get_int("synth.start_time", p.start_time);
  p.validate();
  return p;
}

namespace {

std::string padded(char prefix, std::size_t value, std::size_t count) {
  const auto width = std::to_string(count).size();
  return fmt::format("{}{:0{}}", prefix, value, width);
}

// Zipf(1) popularity over a contiguous block of tag indices.
class TopicBlock {
 public:
  TopicBlock(std::size_t first, std::size_t size) : first_(first) {
    std::vector<double> weights(size);
    for (std::size_t i = 0; i < size; ++i) weights[i] = 1.0 / static_cast<double>(i + 1);
    dist_ = std::discrete_distribution<std::size_t>(weights.begin(), weights.end());
  }

  std::size_t draw(std::mt19937_64& rng) { return first_ + dist_(rng); }

 private:
  std::size_t first_;
  std::discrete_distribution<std::size_t> dist_;
};

std::vector<TopicBlock> make_blocks(std::size_t tags, std::size_t topics) {
  std::vector<TopicBlock> blocks;
  blocks.reserve(topics);
  for (std::size_t j = 0; j < topics; ++j) {
    const std::size_t first = j * tags / topics;
    const std::size_t last = (j + 1) * tags / topics;
    blocks.emplace_back(first, last - first);
  }
  return blocks;
}

struct SynthResource {
  std::size_t topic = 0;
  std::vector<std::size_t> core;
};

struct UserState {
  std::size_t topic = 0;
  // tag -> times of use, in days.
  std::map<std::size_t, std::vector<double>> uses;
  std::set<std::size_t> resources;
};

struct Event {
  Timestamp time = 0;
  std::size_t user = 0;
};

}  // namespace

Folksonomy synth_folksonomy(const SynthParams& params, std::uint64_t seed) {
  params.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto blocks = make_blocks(params.tags, params.topics);
  std::uniform_int_distribution<std::size_t> any_topic(0, params.topics - 1);

  std::vector<UserState> users(params.users);
  std::vector<Event> events;
  events.reserve(params.users * params.posts_per_user);
  std::exponential_distribution<double> gap(1.0 / (params.mean_gap_days * kSecondsPerDay));
  std::uniform_real_distribution<double> offset(0.0, 180.0 * kSecondsPerDay);
  for (std::size_t u = 0; u < params.users; ++u) {
    users[u].topic = any_topic(rng);
    double t = static_cast<double>(params.start_time) + offset(rng);
    for (std::size_t p = 0; p < params.posts_per_user; ++p) {
      if (p > 0) t += std::max(60.0, gap(rng));
      events.push_back(Event{static_cast<Timestamp>(t), u});
    }
  }
  std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    return std::tie(a.time, a.user) < std::tie(b.time, b.user);
  });

  std::vector<SynthResource> resources;
  std::vector<std::vector<std::size_t>> topic_resources(params.topics);
  std::uniform_int_distribution<std::size_t> tag_count(params.min_tags_per_post,
                                                       params.max_tags_per_post);

  auto new_resource = [&](std::size_t topic) {
    SynthResource res;
    res.topic = topic;
    for (std::size_t attempt = 0;
         res.core.size() < params.resource_core_tags && attempt < 20 * params.resource_core_tags;
         ++attempt) {
      const std::size_t tag = blocks[topic].draw(rng);
      if (std::find(res.core.begin(), res.core.end(), tag) == res.core.end()) {
        res.core.push_back(tag);
      }
    }
    resources.push_back(std::move(res));
    topic_resources[topic].push_back(resources.size() - 1);
    return resources.size() - 1;
  };

  std::vector<PostRecord> records;
  records.reserve(events.size());
  std::vector<std::size_t> chosen;
  std::vector<std::size_t> memory_tags;
  std::vector<double> memory_weights;
  for (const auto& ev : events) {
    UserState& user = users[ev.user];
    const double now = static_cast<double>(ev.time) / kSecondsPerDay;
    if (params.topics > 1 && unit(rng) < params.topic_drift) {
      std::uniform_int_distribution<std::size_t> other(0, params.topics - 2);
      const std::size_t next = other(rng);
      user.topic = next >= user.topic ? next + 1 : next;
    }

    std::size_t resource = resources.size();
    if (unit(rng) < params.sharing_rate && !topic_resources[user.topic].empty()) {
      const auto& pool = topic_resources[user.topic];
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      for (int attempt = 0; attempt < 10; ++attempt) {
        const std::size_t candidate = pool[pick(rng)];
        if (!user.resources.contains(candidate)) {
          resource = candidate;
          break;
        }
      }
    }
    if (resource == resources.size()) resource = new_resource(user.topic);
    user.resources.insert(resource);

    memory_tags.clear();
    memory_weights.clear();
    double memory_total = 0.0;
    for (const auto& [tag, times] : user.uses) {
      double w = 0.0;
      for (double t : times) w += std::pow(std::max(now - t, 1.0 / 24.0), -params.reuse_decay);
      memory_tags.push_back(tag);
      memory_weights.push_back(w);
      memory_total += w;
    }
    std::discrete_distribution<std::size_t> recall;
    if (!memory_tags.empty()) {
      recall = std::discrete_distribution<std::size_t>(memory_weights.begin(),
                                                       memory_weights.end());
    }

    const std::size_t want = tag_count(rng);
    chosen.clear();
    const auto& core = resources[resource].core;
    std::uniform_int_distribution<std::size_t> core_pick(0, core.size() - 1);
    for (std::size_t attempt = 0; chosen.size() < want && attempt < 20 * want; ++attempt) {
      std::size_t tag = 0;
      if (unit(rng) < params.context_strength) {
        tag = core[core_pick(rng)];
      } else if (memory_tags.empty() ||
                 unit(rng) * (params.novelty + memory_total) < params.novelty) {
        // A fresh tag is one the user has not used yet, when one turns up.
        tag = blocks[user.topic].draw(rng);
        for (int retry = 0; retry < 20 && user.uses.contains(tag); ++retry) {
          tag = blocks[user.topic].draw(rng);
        }
      } else {
        tag = memory_tags[recall(rng)];
      }
      if (std::find(chosen.begin(), chosen.end(), tag) == chosen.end()) chosen.push_back(tag);
    }

    PostRecord rec;
    rec.user = padded('u', ev.user, params.users);
    rec.resource = padded('r', resource, params.users * params.posts_per_user);
    rec.timestamp = ev.time;
    for (std::size_t tag : chosen) {
      rec.tags.push_back(padded('t', tag, params.tags));
      user.uses[tag].push_back(now);
    }
    records.push_back(std::move(rec));
  }
  return Folksonomy::from_records(std::move(records));
}

Folksonomy synth_planted_groups(std::size_t users, std::size_t posts_per_user,
                                std::size_t tags_per_group, std::size_t tags_per_post,
                                std::uint64_t seed) {
  if (users < 2 || posts_per_user < 1 || tags_per_group < tags_per_post || tags_per_post < 1) {
    throw ParamError("planted groups: inconsistent sizes");
  }
  std::mt19937_64 rng(seed);
  const std::size_t total_tags = 2 * tags_per_group;
  std::vector<TopicBlock> blocks = {TopicBlock(0, tags_per_group),
                                    TopicBlock(tags_per_group, tags_per_group)};
  std::vector<PostRecord> records;
  records.reserve(users * posts_per_user);
  std::size_t next_resource = 0;
  std::vector<std::size_t> chosen;
  for (std::size_t u = 0; u < users; ++u) {
    const std::size_t group = u % 2;
    for (std::size_t p = 0; p < posts_per_user; ++p) {
      chosen.clear();
      while (chosen.size() < tags_per_post) {
        const std::size_t tag = blocks[group].draw(rng);
        if (std::find(chosen.begin(), chosen.end(), tag) == chosen.end()) chosen.push_back(tag);
      }
      PostRecord rec;
      rec.user = padded('u', u, users);
      rec.resource = padded('r', next_resource++, users * posts_per_user);
      rec.timestamp = 1'300'000'000 + static_cast<Timestamp>(p * 86400 + u);
      for (std::size_t tag : chosen) rec.tags.push_back(padded('t', tag, total_tags));
      records.push_back(std::move(rec));
    }
  }
  return Folksonomy::from_records(std::move(records));
}

}  // namespace tagreuse
