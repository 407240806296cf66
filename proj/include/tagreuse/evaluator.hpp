#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tagreuse/config.hpp"
#include "tagreuse/predictor.hpp"
#include "tagreuse/split.hpp"

namespace tagreuse {

struct EvalOptions {
  // Cut-offs to report; F1@5 and nDCG@10 need 5 and 10.
  std::vector<std::size_t> ks = {5, 10};
  bool fixed_precision_denominator = true;
  bool keep_queries = false;
  std::size_t threads = 1;

  void validate() const;
};

struct MetricsAtK {
  std::size_t k = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double ndcg = 0.0;
};

struct QueryRecord {
  UserId user{};
  ResourceId resource{};
  ScoredTagList predicted;
  std::vector<TagId> relevant;
};

struct PredictorReport {
  std::string predictor;
  std::size_t queries = 0;
  // Macro averages over queries, one entry per requested k.
  std::vector<MetricsAtK> metrics;
  // Set when fitting or scoring failed; metrics are then empty.
  std::optional<std::string> error;
  std::vector<QueryRecord> records;

  const MetricsAtK* at(std::size_t k) const;
  double f1_at(std::size_t k) const;
  double ndcg_at(std::size_t k) const;
};

struct EvalReport {
  std::string split_fingerprint;
  std::size_t train_posts = 0;
  std::size_t test_posts = 0;
  std::vector<PredictorReport> predictors;

  const PredictorReport* find(std::string_view predictor) const;
};

// Queries every test post whose user has training posts with the post's
// timestamp as reference time. `predictor` must already be fitted on
// split.train. Throws DataError when there are no queries.
PredictorReport run_protocol(const TagPredictor& predictor, const ChronoSplit& split,
                             const EvalOptions& options = {});

// Builds `name` through the registry, fits it on split.train and runs the
// protocol. Throws ParamError for unknown names.
PredictorReport run_protocol(std::string_view name, const ChronoSplit& split,
                             const Config& config, std::uint64_t seed,
                             const EvalOptions& options = {});

// Runs each predictor in turn. A predictor whose construction, fit or scoring
// throws is recorded with an error instead of aborting the run.
EvalReport evaluate_predictors(const std::vector<std::string>& names, const ChronoSplit& split,
                               const Config& config, std::uint64_t seed,
                               const EvalOptions& options = {});

inline constexpr int kReportFormatVersion = 1;

// Long format: predictor,metric,k,value,queries
void write_metrics_csv(std::ostream& out, const EvalReport& report);
// One row per predictor with F1@5 and nDCG@10 columns.
void write_table_csv(std::ostream& out, const EvalReport& report);
void write_report_json(std::ostream& out, const EvalReport& report, const Folksonomy& names);

}  // namespace tagreuse
