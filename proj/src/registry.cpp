#include "tagreuse/registry.hpp"

#include <algorithm>

#include "tagreuse/cognitive.hpp"
#include "tagreuse/folkrank.hpp"
#include "tagreuse/pitf.hpp"

namespace tagreuse {

const std::vector<std::string>& predictor_names() {
  static const std::vector<std::string> names = {"mp",   "recency",  "semcon", "girp",  "bll",
                                                 "bllac", "folkrank", "pitf",   "random"};
  return names;
}

bool is_known_predictor(std::string_view name) {
  const auto& names = predictor_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

namespace {

BllParams bll_params(const Config& config) {
  BllParams p;
  p.d = config.get_double("bll.d", p.d);
  p.beta = config.get_double("bllac.beta", p.beta);
  return p;
}

}  // namespace

std::unique_ptr<TagPredictor> make_predictor(std::string_view name, const Config& config,
                                             std::uint64_t seed) {
  if (name == "mp") return std::make_unique<MostPopularUserPredictor>();
  if (name == "recency") return std::make_unique<RecencyPredictor>();
  if (name == "semcon") return std::make_unique<SemConPredictor>();
  if (name == "bll") return std::make_unique<BllPredictor>(bll_params(config));
  if (name == "bllac") return std::make_unique<BllAcPredictor>(bll_params(config));
  if (name == "girp") {
    GirpParams p;
    p.lambda = config.get_double("girp.lambda", p.lambda);
    return std::make_unique<GirpPredictor>(p);
  }
  if (name == "folkrank") {
    PageRankOptions options;
    options.damping = config.get_double("folkrank.d", options.damping);
    options.tol = config.get_double("folkrank.tol", options.tol);
    options.max_iter = static_cast<int>(config.get_int("folkrank.max_iter", options.max_iter));
    const std::string weights = config.get_string("folkrank.weights", "counts");
    EdgeWeighting weighting;
    if (weights == "counts") {
      weighting = EdgeWeighting::kCounts;
    } else if (weights == "binary") {
      weighting = EdgeWeighting::kBinary;
    } else {
      throw ParamError("folkrank.weights must be 'counts' or 'binary'");
    }
    return std::make_unique<FolkRankPredictor>(options, weighting);
  }
  if (name == "pitf") {
    TrainConfig cfg;
    cfg.learn_rate = config.get_double("pitf.alpha", cfg.learn_rate);
    cfg.regularization = config.get_double("pitf.gamma", cfg.regularization);
    cfg.epochs = static_cast<int>(config.get_int("pitf.epochs", cfg.epochs));
    cfg.negatives = static_cast<int>(config.get_int("pitf.negatives", cfg.negatives));
    cfg.seed = seed;
    const auto k = config.get_int("pitf.k", 64);
    if (k < 1) throw ParamError("pitf.k must be >= 1");
    return std::make_unique<PitfPredictor>(static_cast<std::size_t>(k), cfg);
  }
  if (name == "random") return std::make_unique<RandomPredictor>(seed);
  throw ParamError("unknown predictor '" + std::string(name) + "'");
}

}  // namespace tagreuse
