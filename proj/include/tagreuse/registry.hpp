#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "tagreuse/config.hpp"
#include "tagreuse/predictor.hpp"

namespace tagreuse {

// Stable predictor names: mp, recency, semcon, girp, bll, bllac, folkrank,
// pitf, random.
const std::vector<std::string>& predictor_names();
bool is_known_predictor(std::string_view name);

// Builds an unfitted predictor. Parameters come from dotted config keys
// (bll.d, bllac.beta, girp.lambda, folkrank.d, folkrank.tol,
// folkrank.max_iter, folkrank.weights, pitf.k, pitf.alpha, pitf.gamma,
// pitf.epochs, pitf.negatives); stochastic predictors use `seed`.
// Throws ParamError for unknown names or invalid parameters.
std::unique_ptr<TagPredictor> make_predictor(std::string_view name, const Config& config,
                                             std::uint64_t seed);

}  // namespace tagreuse
