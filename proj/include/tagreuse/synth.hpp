#pragma once

#include <cstddef>
#include <cstdint>

#include "tagreuse/config.hpp"
#include "tagreuse/folksonomy.hpp"

namespace tagreuse {

// Generator for desk-scale folksonomies with planted reuse behaviour.
//
// Tags are split into topic blocks with Zipf popularity inside each block.
// Every user follows one topic at a time. Each post fills its tag slots
// either from the resource's own core tags (with probability
// context_strength) or from the user's memory: an existing tag i is reused
// with weight sum_j dt_j^-reuse_decay over the user's past uses (dt in days,
// floored at one hour), and a topic tag new to the user is drawn with weight
// `novelty`.
// With probability sharing_rate a post targets an existing resource of the
// user's topic instead of a new one.
struct SynthParams {
  std::size_t users = 100;
  std::size_t posts_per_user = 30;
  std::size_t tags = 1000;
  std::size_t topics = 20;
  std::size_t min_tags_per_post = 1;
  std::size_t max_tags_per_post = 4;
  std::size_t resource_core_tags = 5;
  double reuse_decay = 0.5;
  double novelty = 2.0;
  double context_strength = 0.3;
  double sharing_rate = 0.0;
  // Per-post probability that the user switches to a different topic.
  double topic_drift = 0.0;
  double mean_gap_days = 3.0;
  Timestamp start_time = 1'200'000'000;

  void validate() const;

  // Reads synth.* keys (synth.users, synth.posts_per_user, synth.tags,
  // synth.topics, synth.min_tags, synth.max_tags, synth.core_tags, synth.d,
  // synth.novelty, synth.context, synth.sharing, synth.drift, synth.gap_days).
  static SynthParams from_config(const Config& config);
};

// Deterministic for a given (params, seed) on one standard library.
Folksonomy synth_folksonomy(const SynthParams& params, std::uint64_t seed);

// Two user groups with disjoint tag vocabularies of `tags_per_group` tags
// each (Zipf popularity), every post on its own resource.
Folksonomy synth_planted_groups(std::size_t users, std::size_t posts_per_user,
                                std::size_t tags_per_group, std::size_t tags_per_post,
                                std::uint64_t seed);

}  // namespace tagreuse
