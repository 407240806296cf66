#include "tagreuse/predictor.hpp"

#include <algorithm>

namespace tagreuse {

ScoredTagList top_k(const TagScores& scores, std::size_t k) {
  if (k == 0) throw ParamError("top_k requires k >= 1");
  ScoredTagList all;
  all.reserve(scores.size());
  for (const auto& [tag, score] : scores) all.push_back(ScoredTag{tag, score});
  const std::size_t n = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n), all.end(),
                    ranks_before);
  all.resize(n);
  return all;
}

}  // namespace tagreuse
