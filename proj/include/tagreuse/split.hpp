#pragma once

#include <string>
#include <vector>

#include "tagreuse/folksonomy.hpp"

namespace tagreuse {

// Per-user leave-newest-post-out partition. Train shares the source
// vocabularies, so ids in test posts index the same tables as train.
struct ChronoSplit {
  Folksonomy train;
  // The newest post of every user with at least two posts, ordered by user.
  // Each post's timestamp is its query reference time.
  std::vector<Post> test;
};

// Among posts tied at a user's latest timestamp, the last one in input order
// becomes the test post.
ChronoSplit chronological_split(const Folksonomy& folksonomy);

// FNV-1a digest of the canonical train and test contents, as 16 hex digits.
// Two runs that see the same split report the same fingerprint.
std::string split_fingerprint(const ChronoSplit& split);

}  // namespace tagreuse
