// Acceptance runner: one PASS/FAIL/SKIP line per criterion, nonzero exit on
// any FAIL. Each criterion also has a wall-clock budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "oracles.hpp"
#include "tagreuse/dataset_io.hpp"
#include "tagreuse/evaluator.hpp"
#include "tagreuse/folkrank.hpp"
#include "tagreuse/metrics.hpp"
#include "tagreuse/narrowness.hpp"
#include "tagreuse/pitf.hpp"
#include "tagreuse/reuse.hpp"
#include "tagreuse/split.hpp"
#include "tagreuse/synth.hpp"

using namespace tagreuse;
namespace fs = std::filesystem;

namespace {

enum class Status { kPass, kFail, kSkip };

struct Outcome {
  Status status = Status::kFail;
  std::string detail;
};

Outcome pass_if(bool ok, std::string detail) {
  return {ok ? Status::kPass : Status::kFail, std::move(detail)};
}

// ---- 1 -------------------------------------------------------------------

Outcome narrowness_table() {
  struct Row {
    std::size_t posts, resources;
    const char* ratio;
    FolksonomyType type;
  };
  const Row rows[] = {
      {856755, 856755, "1.000", FolksonomyType::kNarrow},
      {900794, 811175, "1.110", FolksonomyType::kMixed},
      {772108, 683478, "1.129", FolksonomyType::kMixed},
      {1447267, 963741, "1.501", FolksonomyType::kMixed},
      {71062, 12522, "5.674", FolksonomyType::kBroad},
      {55484, 7601, "7.299", FolksonomyType::kBroad},
  };
  std::string got;
  bool ok = true;
  for (const auto& row : rows) {
    const auto report = narrowness_degree(row.posts, row.resources);
    const auto text = format_ratio(report);
    ok = ok && text == row.ratio && report.type == row.type;
    got += fmt::format("{}={} ", text, to_string(report.type));
  }
  return pass_if(ok, got);
}

// ---- 2 -------------------------------------------------------------------

Outcome metric_oracle() {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::uint32_t> tag(0, 40);
  std::uniform_int_distribution<std::size_t> len(0, 20);
  std::uniform_int_distribution<std::size_t> rel_len(1, 10);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<TagId> predicted;
    std::set<TagId> seen;
    for (std::size_t n = len(rng); predicted.size() < n;) {
      const auto t = static_cast<TagId>(tag(rng));
      if (seen.insert(t).second) predicted.push_back(t);
    }
    std::set<TagId> relevant;
    for (std::size_t n = rel_len(rng); relevant.size() < n;) {
      relevant.insert(static_cast<TagId>(tag(rng)));
    }
    ScoredTagList list;
    for (std::size_t j = 0; j < predicted.size(); ++j) {
      list.push_back({predicted[j], static_cast<double>(predicted.size() - j)});
    }
    const std::vector<TagId> rel(relevant.begin(), relevant.end());
    const auto pr = precision_recall_at_k(list, rel, 5);
    const double f1 = f1_score(pr.precision, pr.recall);
    const double f1_ref = oracle::f1(oracle::precision_at(predicted, relevant, 5),
                                     oracle::recall_at(predicted, relevant, 5));
    const double ndcg = ndcg_at_k(list, rel, 10);
    const double ndcg_ref = oracle::ndcg_at(predicted, relevant, 10);
    worst = std::max({worst, std::abs(f1 - f1_ref), std::abs(ndcg - ndcg_ref)});
  }
  return pass_if(worst <= 1e-12, fmt::format("max abs diff {:.3g} over 1000 cases", worst));
}

// ---- 3 -------------------------------------------------------------------

Outcome reuse_signs() {
  SynthParams p;
  p.users = 500;
  p.posts_per_user = 50;
  p.reuse_decay = 0.5;
  p.context_strength = 0.3;
  p.sharing_rate = 0.5;
  p.mean_gap_days = 0.5;
  const auto split = chronological_split(synth_folksonomy(p, 42));
  const auto freq = pool_by_frequency(split);
  const auto rec = pool_by_recency(split);
  const auto ctx = pool_by_context(split);
  if (!freq.fit || !rec.fit || !ctx.fit) return {Status::kFail, "a fit failed"};
  const bool ok = freq.fit->slope > 0 && rec.fit->slope < 0 && ctx.fit->slope > 0 &&
                  freq.fit->r2 >= 0.3 && rec.fit->r2 >= 0.3 && ctx.fit->r2 >= 0.3;
  return pass_if(ok, fmt::format("k_freq {:.3f} (r2 {:.3f})  k_rec {:.3f} (r2 {:.3f})  "
                                 "k_ctx {:.3f} (r2 {:.3f})",
                                 freq.fit->slope, freq.fit->r2, rec.fit->slope, rec.fit->r2,
                                 ctx.fit->slope, ctx.fit->r2));
}

// ---- 4 -------------------------------------------------------------------

Outcome regression_oracle() {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> x_dist(1.0, 1000.0);
  std::uniform_int_distribution<std::size_t> n_dist(1, 500);
  std::uniform_int_distribution<int> size_dist(3, 80);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ReusePoint> points;
    std::vector<double> xs, ys, ws;
    const int size = size_dist(rng);
    for (int i = 0; i < size; ++i) {
      ReusePoint pt;
      pt.x = std::floor(x_dist(rng));
      pt.n_total = n_dist(rng);
      pt.n_reused = std::uniform_int_distribution<std::size_t>(1, pt.n_total)(rng);
      points.push_back(pt);
      xs.push_back(std::log10(pt.x));
      ys.push_back(std::log10(static_cast<double>(pt.n_reused) / pt.n_total));
      ws.push_back(1.0);
    }
    const auto fit = loglog_regression(points);
    const auto ref = oracle::normal_equations(xs, ys, ws);
    worst = std::max({worst, std::abs(fit.slope - ref.slope),
                      std::abs(fit.intercept - ref.intercept), std::abs(fit.r2 - ref.r2)});
  }
  double worst_slope = 0.0, worst_r2 = 0.0;
  for (double slope : {-1.074, 0.5, -0.5, 1.2}) {
    std::vector<ReusePoint> points;
    for (double x : {1.0, 2.0, 3.0, 5.0, 8.0, 13.0, 21.0, 34.0, 55.0}) {
      ReusePoint pt;
      pt.x = x;
      pt.n_total = 1'000'000'000'000;
      pt.n_reused = static_cast<std::size_t>(std::llround(0.01 * std::pow(x, slope) * 1e12));
      points.push_back(pt);
    }
    const auto fit = loglog_regression(points);
    worst_slope = std::max(worst_slope, std::abs(fit.slope - slope));
    worst_r2 = std::max(worst_r2, std::abs(fit.r2 - 1.0));
  }
  const bool ok = worst <= 1e-10 && worst_slope <= 1e-6 && worst_r2 <= 1e-9;
  return pass_if(ok, fmt::format("oracle diff {:.3g}; planted slope err {:.3g}, |r2-1| {:.3g}",
                                 worst, worst_slope, worst_r2));
}

// ---- 5 -------------------------------------------------------------------

Outcome folkrank_oracle() {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> size(2, 50);
  std::uniform_int_distribution<int> weight(1, 5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = size(rng);
    std::uniform_int_distribution<std::size_t> node(0, n - 1);
    std::vector<WeightedEdge> edges;
    std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
    for (std::size_t e = 0, m = 2 * n; e < m; ++e) {
      const auto a = node(rng), b = node(rng);
      if (a == b) continue;
      const double w = weight(rng);
      edges.push_back({static_cast<NodeId>(a), static_cast<NodeId>(b), w});
      dense[a][b] += w;
      dense[b][a] += w;
    }
    std::vector<double> pref(n);
    for (double& v : pref) v = unit(rng);
    const double total = std::accumulate(pref.begin(), pref.end(), 0.0);
    for (double& v : pref) v /= total;
    const auto sparse = pagerank(FolkGraph(n, edges), pref).weights;
    const auto ref = oracle::dense_pagerank(dense, pref, 0.7);
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(sparse[i] - ref[i]));
  }

  double worst_sum = 0.0;
  bool uniform_zero = true;
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = oracle::random_folksonomy(rng, 80, 6, 12, 10);
    const auto g = build_graph(f);
    const auto base = pagerank(g, uniform_preference(g.num_nodes())).weights;
    const auto& post = f.posts()[rng() % f.num_posts()];
    const auto biased =
        pagerank(g, folkrank_preference(g, g.user_node(post.user), g.resource_node(post.resource)))
            .weights;
    double sum = 0.0;
    for (std::size_t i = 0; i < base.size(); ++i) sum += biased[i] - base[i];
    worst_sum = std::max(worst_sum, std::abs(sum));
    const auto again =
        pagerank(g, folkrank_preference(g, std::nullopt, std::nullopt)).weights;
    for (std::size_t i = 0; i < base.size(); ++i) uniform_zero = uniform_zero && again[i] == base[i];
  }
  const bool ok = worst <= 1e-8 && worst_sum <= 1e-9 && uniform_zero;
  return pass_if(ok, fmt::format("Linf vs dense {:.3g}; |sum diff| {:.3g}; uniform diff zero: {}",
                                 worst, worst_sum, uniform_zero));
}

// ---- 6 -------------------------------------------------------------------

double objective(const PitfModel& m, UserId u, ResourceId r, TagId p, TagId n, double gamma) {
  const double x = pitf_score(m, u, r, p) - pitf_score(m, u, r, n);
  double norm = 0.0;
  auto add = [&](std::span<const double> row) {
    for (double v : row) norm += v * v;
  };
  add(m.user_row(index_of(u)));
  add(m.resource_row(index_of(r)));
  add(m.tag_user_row(index_of(p)));
  add(m.tag_user_row(index_of(n)));
  add(m.tag_resource_row(index_of(p)));
  add(m.tag_resource_row(index_of(n)));
  return -std::log1p(std::exp(-x)) - 0.5 * gamma * norm;
}

Outcome pitf_checks() {
  std::mt19937_64 rng(6);
  const double h = 1e-5;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    auto m = init_model(5, 5, 8, 4, rng());
    std::normal_distribution<double> spread(0.0, 0.5);
    for (auto* t : {&m.user, &m.resource, &m.tag_user, &m.tag_resource}) {
      for (double& v : *t) v = spread(rng);
    }
    const UserId u = id_at<UserId>(rng() % 5);
    const ResourceId r = id_at<ResourceId>(rng() % 5);
    const TagId p = id_at<TagId>(rng() % 8);
    TagId n = id_at<TagId>(rng() % 8);
    while (n == p) n = id_at<TagId>(rng() % 8);
    const double gamma = 0.01;
    const auto g = bpr_gradient(m, u, r, p, n, gamma);
    auto check = [&](std::vector<double>& table, std::size_t row, const std::vector<double>& grad) {
      for (std::size_t f = 0; f < m.factors; ++f) {
        double& v = table[row * m.factors + f];
        const double saved = v;
        v = saved + h;
        const double up = objective(m, u, r, p, n, gamma);
        v = saved - h;
        const double down = objective(m, u, r, p, n, gamma);
        v = saved;
        const double numeric = (up - down) / (2 * h);
        const double scale = std::max(1e-8, std::abs(numeric) + std::abs(grad[f]));
        worst = std::max(worst, std::abs(numeric - grad[f]) / scale);
      }
    };
    check(m.user, index_of(u), g.user);
    check(m.resource, index_of(r), g.resource);
    check(m.tag_user, index_of(p), g.tag_user_pos);
    check(m.tag_user, index_of(n), g.tag_user_neg);
    check(m.tag_resource, index_of(p), g.tag_resource_pos);
    check(m.tag_resource, index_of(n), g.tag_resource_neg);
  }

  const auto split = chronological_split(synth_planted_groups(100, 20, 30, 3, 42));
  Config config;
  config.set("pitf.epochs", "30");
  const double pitf = run_protocol("pitf", split, config, 42).f1_at(5);
  const double random = run_protocol("random", split, config, 42).f1_at(5);
  const bool ok = worst < 1e-4 && pitf >= 2.0 * random;
  return pass_if(ok, fmt::format("max rel grad err {:.3g}; planted F1@5 pitf {:.4f} vs random {:.4f}",
                                 worst, pitf, random));
}

// ---- 7, 8 ----------------------------------------------------------------

std::map<std::string, double> ndcg10(const ChronoSplit& split,
                                     const std::vector<std::string>& names) {
  std::map<std::string, double> out;
  for (const auto& name : names) out[name] = run_protocol(name, split, Config{}, 1).ndcg_at(10);
  return out;
}

Outcome narrow_pattern() {
  SynthParams p;
  p.users = 300;
  p.posts_per_user = 40;
  p.sharing_rate = 0.0;
  p.topic_drift = 0.1;
  const auto f = synth_folksonomy(p, 42);
  const auto split = chronological_split(f);
  const auto s = ndcg10(split, {"mp", "recency", "bll"});
  const auto bll = run_protocol("bll", split, Config{}, 1);
  const auto bllac = run_protocol("bllac", split, Config{}, 1);
  bool identical = bll.metrics.size() == bllac.metrics.size();
  for (std::size_t i = 0; identical && i < bll.metrics.size(); ++i) {
    identical = bll.metrics[i].f1 == bllac.metrics[i].f1 &&
                bll.metrics[i].ndcg == bllac.metrics[i].ndcg;
  }
  const bool ok = narrowness_degree(f).type == FolksonomyType::kNarrow &&
                  s.at("recency") > s.at("mp") && s.at("bll") >= s.at("recency") && identical;
  return pass_if(ok, fmt::format("nDCG@10 mp {:.4f} recency {:.4f} bll {:.4f}; bllac == bll: {}",
                                 s.at("mp"), s.at("recency"), s.at("bll"), identical));
}

Outcome broad_pattern() {
  SynthParams p;
  p.users = 300;
  p.posts_per_user = 40;
  p.context_strength = 0.8;
  p.sharing_rate = 0.7;
  const auto broad_f = synth_folksonomy(p, 42);
  p.sharing_rate = 0.0;
  const auto narrow_f = synth_folksonomy(p, 42);
  const auto ratio = narrowness_degree(broad_f).posts_per_resource;
  const auto broad = ndcg10(chronological_split(broad_f), {"semcon", "bll", "bllac"});
  const auto narrow = ndcg10(chronological_split(narrow_f), {"semcon"});
  const bool ok = ratio > 2.0 && broad.at("semcon") > narrow.at("semcon") &&
                  broad.at("bllac") > broad.at("bll");
  return pass_if(ok, fmt::format("|P|/|R| {:.3f}; semcon broad {:.4f} vs narrow {:.4f}; "
                                 "bllac {:.4f} vs bll {:.4f}",
                                 ratio, broad.at("semcon"), narrow.at("semcon"), broad.at("bllac"),
                                 broad.at("bll")));
}

// ---- 9 -------------------------------------------------------------------

std::string capture(const std::string& cmd, int& status) {
  std::string out;
  FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
  if (!pipe) {
    status = -1;
    return out;
  }
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof(buf), pipe)) out.append(buf, n);
  status = pclose(pipe);
  return out;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    files[fs::relative(entry.path(), dir).string()] =
        std::string(std::istreambuf_iterator<char>(in), {});
  }
  return files;
}

Outcome cli_determinism() {
  const std::string bin = TAGREUSE_CLI;
  const fs::path root = fs::temp_directory_path() / "tagreuse_acceptance_determinism";
  fs::remove_all(root);
  const std::string synth_keys = "synth.users=60 synth.posts_per_user=15 synth.sharing=0.4";
  std::vector<std::map<std::string, std::string>> runs;
  std::vector<std::string> logs;
  std::string failure;
  for (int run = 0; run < 2; ++run) {
    const fs::path dir = root / fmt::format("run{}", run);
    fs::create_directories(dir);
    const std::string data = (dir / "data.tsv").string();
    const std::vector<std::string> commands = {
        fmt::format("{} synth --seed 7 --out {} {}", bin, data, synth_keys),
        fmt::format("{} analyze --dataset {} --out {}", bin, data, (dir / "analyze").string()),
        fmt::format("{} analyze --seed 7 --bin log2 --out {} {}", bin,
                    (dir / "analyze_synth").string(), synth_keys),
        fmt::format("{} evaluate --dataset {} --seed 7 --threads 1 --out {} "
                    "--predictors mp,recency,semcon,girp,bll,bllac,folkrank,pitf,random "
                    "pitf.k=16 pitf.epochs=5 eval.keep_queries=true",
                    bin, data, (dir / "evaluate").string()),
    };
    std::string log;
    for (const auto& cmd : commands) {
      int status = 0;
      log += capture(cmd, status);
      if (status != 0 && failure.empty()) failure = fmt::format("exit {} from: {}", status, cmd);
    }
    // Paths differ between runs by construction.
    for (std::size_t pos; (pos = log.find(dir.string())) != std::string::npos;) {
      log.replace(pos, dir.string().size(), "<dir>");
    }
    logs.push_back(log);
    runs.push_back(snapshot(dir));
  }
  fs::remove_all(root);
  if (!failure.empty()) return {Status::kFail, failure};
  const bool ok = runs[0] == runs[1] && logs[0] == logs[1] && runs[0].size() >= 12;
  return pass_if(ok, fmt::format("{} output files and console output byte-identical: {}",
                                 runs[0].size(), ok));
}

// ---- 10 ------------------------------------------------------------------

Outcome pooling_oracle() {
  std::mt19937_64 rng(10);
  int checked = 0;
  bool ok = true;
  while (checked < 20) {
    const auto split = chronological_split(oracle::random_folksonomy(rng, 200, 10, 25, 15));
    if (split.test.empty()) continue;
    auto counts = [](const ReuseCurve& curve) {
      oracle::PoolCounts out;
      for (const auto& p : curve.points) {
        out[static_cast<std::int64_t>(p.x)] = {p.n_total, p.n_reused};
      }
      return out;
    };
    ok = ok && counts(pool_by_frequency(split)) == oracle::pool_frequency(split);
    ok = ok && counts(pool_by_recency(split)) == oracle::pool_recency(split);
    ok = ok && counts(pool_by_context(split)) == oracle::pool_context(split);
    ++checked;
  }
  return pass_if(ok, fmt::format("{} datasets, three curves each", checked));
}

// ---- 11 ------------------------------------------------------------------

Outcome bibsonomy() {
  const char* path = std::getenv("TAGREUSE_BIBSONOMY");
  if (!path || !*path) return {Status::kSkip, "set TAGREUSE_BIBSONOMY to a processed TSV dump"};
  const auto split = chronological_split(read_dataset(path));
  const auto freq = pool_by_frequency(split);
  const auto rec = pool_by_recency(split);
  const auto ctx = pool_by_context(split);
  const bool signs = freq.fit && rec.fit && ctx.fit && freq.fit->slope > 0 &&
                     rec.fit->slope < 0 && ctx.fit->slope > 0;
  const auto s = ndcg10(split, {"mp", "bll", "bllac"});
  const bool order = s.at("bllac") > s.at("bll") && s.at("bll") > s.at("mp");
  return pass_if(signs && order,
                 fmt::format("signs ok: {}; nDCG@10 bllac {:.4f} bll {:.4f} mp {:.4f}", signs,
                             s.at("bllac"), s.at("bll"), s.at("mp")));
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "narrowness arithmetic", 1, narrowness_table},
      {2, "metric oracle", 5, metric_oracle},
      {3, "reuse slope signs", 60, reuse_signs},
      {4, "regression oracle", 5, regression_oracle},
      {5, "folkrank oracle", 30, folkrank_oracle},
      {6, "pitf gradient and lift", 120, pitf_checks},
      {7, "narrow ordering", 60, narrow_pattern},
      {8, "broad ordering", 120, broad_pattern},
      {9, "cli determinism", 60, cli_determinism},
      {10, "pooling oracle", 10, pooling_oracle},
      {11, "bibsonomy", 0, bibsonomy},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {Status::kFail, fmt::format("exception: {}", e.what())};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (outcome.status == Status::kPass && c.budget_seconds > 0 && seconds > c.budget_seconds) {
      outcome.status = Status::kFail;
      outcome.detail += fmt::format("; over budget of {}s", c.budget_seconds);
    }
    const char* label = outcome.status == Status::kPass   ? "PASS"
                        : outcome.status == Status::kSkip ? "SKIP"
                                                          : "FAIL";
    failures += outcome.status == Status::kFail;
    fmt::print("criterion {:>2} {:<24} {} ({:.2f}s)  {}\n", c.id, c.name, label, seconds,
               outcome.detail);
    std::fflush(stdout);
  }
  fmt::print("{}\n", failures == 0 ? "acceptance: all criteria passed or skipped"
                                   : fmt::format("acceptance: {} criteria failed", failures));
  return failures == 0 ? 0 : 1;
}
