#pragma once

#include <cstddef>
#include <span>

#include "tagreuse/predictor.hpp"

namespace tagreuse {

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
};

// `relevant` must be sorted ascending and non-empty. With a fixed
// denominator, precision is hits / k even when fewer than k tags were
// predicted; otherwise hits / min(k, |predicted|).
PrecisionRecall precision_recall_at_k(const ScoredTagList& predicted,
                                      std::span<const TagId> relevant, std::size_t k,
                                      bool fixed_denominator = true);

double f1_score(double precision, double recall);

// Binary-relevance nDCG with log2(rank + 1) discounts.
double ndcg_at_k(const ScoredTagList& predicted, std::span<const TagId> relevant, std::size_t k);

}  // namespace tagreuse
