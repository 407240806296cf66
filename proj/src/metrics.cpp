#include "tagreuse/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace tagreuse {
namespace {

void check_query(std::span<const TagId> relevant, std::size_t k) {
  if (k == 0) throw ParamError("metric cut-off k must be >= 1");
  if (relevant.empty()) throw ParamError("relevant tag set is empty");
  if (!std::is_sorted(relevant.begin(), relevant.end())) {
    throw ParamError("relevant tags must be sorted");
  }
}

bool is_relevant(std::span<const TagId> relevant, TagId tag) {
  return std::binary_search(relevant.begin(), relevant.end(), tag);
}

}  // namespace

PrecisionRecall precision_recall_at_k(const ScoredTagList& predicted,
                                      std::span<const TagId> relevant, std::size_t k,
                                      bool fixed_denominator) {
  check_query(relevant, k);
  const std::size_t depth = std::min(k, predicted.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < depth; ++i) {
    if (is_relevant(relevant, predicted[i].tag)) ++hits;
  }
  PrecisionRecall out;
  const std::size_t denominator = fixed_denominator ? k : depth;
  out.precision = denominator > 0 ? static_cast<double>(hits) / static_cast<double>(denominator)
                                  : 0.0;
  out.recall = static_cast<double>(hits) / static_cast<double>(relevant.size());
  return out;
}

double f1_score(double precision, double recall) {
  if (precision + recall <= 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

double ndcg_at_k(const ScoredTagList& predicted, std::span<const TagId> relevant, std::size_t k) {
  check_query(relevant, k);
  double dcg = 0.0;
  const std::size_t depth = std::min(k, predicted.size());
  for (std::size_t i = 0; i < depth; ++i) {
    if (is_relevant(relevant, predicted[i].tag)) dcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  }
  double idcg = 0.0;
  const std::size_t ideal = std::min(k, relevant.size());
  for (std::size_t i = 0; i < ideal; ++i) idcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  return dcg / idcg;
}

}  // namespace tagreuse
