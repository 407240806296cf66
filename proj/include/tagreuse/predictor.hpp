#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "tagreuse/folksonomy.hpp"

namespace tagreuse {

// Sparse tag scores for one query. Tags without evidence are absent.
using TagScores = std::unordered_map<TagId, double>;

struct ScoredTag {
  TagId tag{};
  double score = 0.0;

  bool operator==(const ScoredTag&) const = default;
};

// Ordered by (score desc, tag id asc), no duplicate tags.
using ScoredTagList = std::vector<ScoredTag>;

// Deterministic total order used for every ranking.
inline bool ranks_before(const ScoredTag& a, const ScoredTag& b) noexcept {
  if (a.score != b.score) return a.score > b.score;
  return a.tag < b.tag;
}

// The k best tags; shorter when fewer are scored. Throws ParamError on k == 0.
ScoredTagList top_k(const TagScores& scores, std::size_t k);

// A tag predictor is fitted once on training posts and then answers
// (user, resource, reference time) queries. score() must not mutate state, so
// fitted predictors can be queried from several threads.
class TagPredictor {
 public:
  virtual ~TagPredictor() = default;

  virtual std::string name() const = 0;
  virtual void fit(const Folksonomy& train) = 0;
  virtual TagScores score(UserId user, ResourceId resource, Timestamp reference_time) const = 0;
};

}  // namespace tagreuse
