#include "tagreuse/evaluator.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include <fmt/format.h>

#include "json.hpp"

#include "tagreuse/metrics.hpp"
#include "tagreuse/registry.hpp"

namespace tagreuse {

void EvalOptions::validate() const {
  if (ks.empty()) throw ParamError("at least one metric cut-off is required");
  for (std::size_t k : ks) {
    if (k < 1 || k > 100) throw ParamError("metric cut-offs must lie in 1..100");
  }
  if (threads < 1) throw ParamError("thread count must be >= 1");
}

const MetricsAtK* PredictorReport::at(std::size_t k) const {
  for (const auto& m : metrics) {
    if (m.k == k) return &m;
  }
  return nullptr;
}

double PredictorReport::f1_at(std::size_t k) const {
  const auto* m = at(k);
  if (m == nullptr) throw ParamError("k=" + std::to_string(k) + " was not evaluated");
  return m->f1;
}

double PredictorReport::ndcg_at(std::size_t k) const {
  const auto* m = at(k);
  if (m == nullptr) throw ParamError("k=" + std::to_string(k) + " was not evaluated");
  return m->ndcg;
}

const PredictorReport* EvalReport::find(std::string_view predictor) const {
  for (const auto& p : predictors) {
    if (p.predictor == predictor) return &p;
  }
  return nullptr;
}

namespace {

struct QueryResult {
  std::vector<MetricsAtK> metrics;
  ScoredTagList predicted;
};

QueryResult evaluate_query(const TagPredictor& predictor, const Post& post,
                           const EvalOptions& options, std::size_t depth) {
  QueryResult result;
  result.predicted = top_k(predictor.score(post.user, post.resource, post.timestamp), depth);
  for (std::size_t k : options.ks) {
    const auto pr =
        precision_recall_at_k(result.predicted, post.tags, k, options.fixed_precision_denominator);
    MetricsAtK m;
    m.k = k;
    m.precision = pr.precision;
    m.recall = pr.recall;
    m.f1 = f1_score(pr.precision, pr.recall);
    m.ndcg = ndcg_at_k(result.predicted, post.tags, k);
    result.metrics.push_back(m);
  }
  return result;
}

}  // namespace

PredictorReport run_protocol(const TagPredictor& predictor, const ChronoSplit& split,
                             const EvalOptions& options) {
  options.validate();
  std::vector<const Post*> queries;
  for (const auto& post : split.test) {
    if (!split.train.posts_of(post.user).empty()) queries.push_back(&post);
  }
  if (queries.empty()) throw DataError("evaluation has no test queries");

  const std::size_t depth = *std::max_element(options.ks.begin(), options.ks.end());
  std::vector<QueryResult> results(queries.size());

  const std::size_t workers = std::min(options.threads, queries.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < queries.size(); ++i) {
      results[i] = evaluate_query(predictor, *queries[i], options, depth);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        try {
          for (std::size_t i = next++; i < queries.size(); i = next++) {
            results[i] = evaluate_query(predictor, *queries[i], options, depth);
          }
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = queries.size();
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  // Reduce in query order so the averages do not depend on the thread count.
  PredictorReport report;
  report.predictor = predictor.name();
  report.queries = queries.size();
  report.metrics.resize(options.ks.size());
  for (std::size_t j = 0; j < options.ks.size(); ++j) report.metrics[j].k = options.ks[j];
  for (const auto& r : results) {
    for (std::size_t j = 0; j < r.metrics.size(); ++j) {
      report.metrics[j].precision += r.metrics[j].precision;
      report.metrics[j].recall += r.metrics[j].recall;
      report.metrics[j].f1 += r.metrics[j].f1;
      report.metrics[j].ndcg += r.metrics[j].ndcg;
    }
  }
  const double n = static_cast<double>(queries.size());
  for (auto& m : report.metrics) {
    m.precision /= n;
    m.recall /= n;
    m.f1 /= n;
    m.ndcg /= n;
  }
  if (options.keep_queries) {
    report.records.reserve(queries.size());
    for (std::size_t i = 0; i < queries.size(); ++i) {
      report.records.push_back(QueryRecord{queries[i]->user, queries[i]->resource,
                                           std::move(results[i].predicted), queries[i]->tags});
    }
  }
  return report;
}

PredictorReport run_protocol(std::string_view name, const ChronoSplit& split,
                             const Config& config, std::uint64_t seed,
                             const EvalOptions& options) {
  auto predictor = make_predictor(name, config, seed);
  predictor->fit(split.train);
  return run_protocol(*predictor, split, options);
}

EvalReport evaluate_predictors(const std::vector<std::string>& names, const ChronoSplit& split,
                               const Config& config, std::uint64_t seed,
                               const EvalOptions& options) {
  options.validate();
  EvalReport report;
  report.split_fingerprint = split_fingerprint(split);
  report.train_posts = split.train.num_posts();
  report.test_posts = split.test.size();
  for (const auto& name : names) {
    if (!is_known_predictor(name)) throw ParamError("unknown predictor '" + name + "'");
  }
  for (const auto& name : names) {
    try {
      report.predictors.push_back(run_protocol(name, split, config, seed, options));
    } catch (const std::exception& e) {
      PredictorReport failed;
      failed.predictor = name;
      failed.error = e.what();
      report.predictors.push_back(std::move(failed));
    }
  }
  return report;
}

void write_metrics_csv(std::ostream& out, const EvalReport& report) {
  out << "predictor,metric,k,value,queries\n";
  for (const auto& p : report.predictors) {
    for (const auto& m : p.metrics) {
      const std::pair<const char*, double> rows[] = {
          {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}, {"ndcg", m.ndcg}};
      for (const auto& [metric, value] : rows) {
        out << fmt::format("{},{},{},{:.17g},{}\n", p.predictor, metric, m.k, value, p.queries);
      }
    }
  }
}

void write_table_csv(std::ostream& out, const EvalReport& report) {
  out << "predictor,f1@5,ndcg@10\n";
  for (const auto& p : report.predictors) {
    if (p.error) {
      out << p.predictor << ",,\n";
      continue;
    }
    const auto* f1 = p.at(5);
    const auto* ndcg = p.at(10);
    out << p.predictor << ',' << (f1 ? fmt::format("{:.6f}", f1->f1) : std::string()) << ','
        << (ndcg ? fmt::format("{:.6f}", ndcg->ndcg) : std::string()) << '\n';
  }
}

void write_report_json(std::ostream& out, const EvalReport& report, const Folksonomy& names) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["format_version"] = kReportFormatVersion;
  doc["split_fingerprint"] = report.split_fingerprint;
  doc["train_posts"] = report.train_posts;
  doc["test_posts"] = report.test_posts;
  ordered_json predictors = ordered_json::array();
  for (const auto& p : report.predictors) {
    ordered_json entry;
    entry["predictor"] = p.predictor;
    entry["queries"] = p.queries;
    if (p.error) entry["error"] = *p.error;
    ordered_json metrics = ordered_json::array();
    for (const auto& m : p.metrics) {
      metrics.push_back({{"k", m.k},
                         {"precision", m.precision},
                         {"recall", m.recall},
                         {"f1", m.f1},
                         {"ndcg", m.ndcg}});
    }
    entry["metrics"] = std::move(metrics);
    if (!p.records.empty()) {
      ordered_json records = ordered_json::array();
      for (const auto& r : p.records) {
        ordered_json predicted = ordered_json::array();
        for (const auto& s : r.predicted) {
          predicted.push_back({{"tag", names.tag_name(s.tag)}, {"score", s.score}});
        }
        ordered_json relevant = ordered_json::array();
        for (TagId t : r.relevant) relevant.push_back(names.tag_name(t));
        records.push_back({{"user", names.user_name(r.user)},
                           {"resource", names.resource_name(r.resource)},
                           {"predicted", std::move(predicted)},
                           {"relevant", std::move(relevant)}});
      }
      entry["queries_detail"] = std::move(records);
    }
    predictors.push_back(std::move(entry));
  }
  doc["predictors"] = std::move(predictors);
  out << doc.dump(2) << '\n';
}

}  // namespace tagreuse
