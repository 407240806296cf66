#include "tagreuse/cli.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"

#include "tagreuse/config.hpp"
#include "tagreuse/dataset_io.hpp"
#include "tagreuse/evaluator.hpp"
#include "tagreuse/narrowness.hpp"
#include "tagreuse/registry.hpp"
#include "tagreuse/reuse.hpp"
#include "tagreuse/split.hpp"
#include "tagreuse/synth.hpp"

namespace tagreuse {
namespace {

namespace fs = std::filesystem;

const char* const kDefaultPredictors = "mp,recency,semcon,girp,bll,bllac,folkrank,pitf";

// Raised for bad invocations that CLI11 cannot see (missing seed, bad enum).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Values given as named flags. Unset ones leave the config untouched.
struct FlagValues {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::string> dataset;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::optional<std::string> predictors;
  std::optional<std::string> factor;
  std::optional<std::size_t> min_support;
  std::optional<std::string> bin;
};

Config resolve_config(const FlagValues& flags) {
  Config config;
  if (!flags.config_path.empty()) config = Config::load(flags.config_path);
  for (const auto& assignment : flags.overrides) config.set_assignment(assignment);
  if (flags.dataset) config.set("dataset", *flags.dataset);
  if (flags.out) config.set("out", *flags.out);
  if (flags.seed) config.set("seed", std::to_string(*flags.seed));
  if (flags.threads) config.set("threads", std::to_string(*flags.threads));
  if (flags.predictors) config.set("predictors", *flags.predictors);
  if (flags.factor) config.set("factor", *flags.factor);
  if (flags.min_support) config.set("min_support", std::to_string(*flags.min_support));
  if (flags.bin) config.set("bin", *flags.bin);
  return config;
}

std::uint64_t require_seed(const Config& config, std::string_view why) {
  if (!config.contains("seed")) throw UsageError(fmt::format("--seed is required {}", why));
  return config.get_uint("seed", 0);
}

std::string require_out(const Config& config) {
  auto out = config.get("out");
  if (!out || out->empty()) throw UsageError("--out is required");
  return *out;
}

struct LoadedData {
  Folksonomy folksonomy;
  std::string name;
};

LoadedData load_data(const Config& config) {
  if (auto path = config.get("dataset"); path && !path->empty()) {
    if (!fs::exists(*path)) throw DataError(fmt::format("{}: no such file", *path));
    return LoadedData{read_dataset(*path), fs::path(*path).stem().string()};
  }
  const auto params = SynthParams::from_config(config);
  const auto seed = require_seed(config, "when no --dataset is given");
  return LoadedData{synth_folksonomy(params, seed), "synthetic"};
}

// Renders into memory first so a failure leaves no output behind, then
// renames a sibling temp file into place.
void write_atomic(const fs::path& path, const std::function<void(std::ostream&)>& render) {
  std::ostringstream buffer;
  render(buffer);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
    if (!file) throw DataError(fmt::format("{}: cannot open for writing", tmp.string()));
    const std::string text = buffer.str();
    file.write(text.data(), static_cast<std::streamsize>(text.size()));
    file.close();
    if (!file) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw DataError(fmt::format("{}: write failed", tmp.string()));
    }
  }
  fs::rename(tmp, path);
}

std::vector<ReuseFactor> factors_of(const Config& config) {
  const std::string name = config.get_string("factor", "all");
  if (name == "all") return {ReuseFactor::kFrequency, ReuseFactor::kRecency, ReuseFactor::kContext};
  if (auto f = parse_factor(name)) return {*f};
  throw UsageError(fmt::format("--factor must be frequency, recency, context or all, got '{}'", name));
}

Binning binning_of(const Config& config) {
  const std::string name = config.get_string("bin", "raw");
  if (name == "raw") return Binning::kRaw;
  if (name == "log2") return Binning::kLog2;
  throw UsageError(fmt::format("--bin must be raw or log2, got '{}'", name));
}

std::size_t threads_of(const Config& config) {
  const auto threads = config.get_int("threads", 1);
  if (threads < 1) throw UsageError("--threads must be >= 1");
  return static_cast<std::size_t>(threads);
}

int cmd_analyze(const Config& config, std::ostream& out, std::ostream& err) {
  const auto factors = factors_of(config);
  PoolOptions options;
  options.context_binning = binning_of(config);
  const auto min_support = config.get_int("min_support", 1);
  if (min_support < 1) throw UsageError("--min-support must be >= 1");
  options.regression.min_support = static_cast<std::size_t>(min_support);
  options.regression.instance_weighted = config.get_bool("regression.weighted", false);
  const fs::path dir = require_out(config);

  const auto data = load_data(config);
  const auto split = chronological_split(data.folksonomy);
  const auto fingerprint = split_fingerprint(split);

  std::vector<ReuseCurve> curves;
  for (auto factor : factors) curves.push_back(pool_reuse(factor, split, options));

  for (const auto& curve : curves) {
    const std::string stem = fmt::format("reuse_{}", to_string(curve.factor));
    write_atomic(dir / (stem + ".csv"), [&](std::ostream& o) { write_curve_csv(o, curve); });
    write_atomic(dir / (stem + ".json"),
                 [&](std::ostream& o) { write_curve_json(o, curve, data.name, fingerprint); });
  }

  out << fmt::format("dataset {}  split {}\n", data.name, fingerprint);
  out << fmt::format("{:<10} {:>10} {:>8} {:>7}\n", "factor", "k", "r2", "points");
  for (const auto& curve : curves) {
    if (curve.points.empty() && curve.factor == ReuseFactor::kContext) {
      err << "warning: context curve is empty (no test post has foreign tags on its resource)\n";
    }
    if (curve.fit) {
      out << fmt::format("{:<10} {:>10.4f} {:>8.4f} {:>7}\n", to_string(curve.factor),
                         curve.fit->slope, curve.fit->r2, curve.fit->points);
    } else {
      out << fmt::format("{:<10} {:>10} {:>8} {:>7}\n", to_string(curve.factor), "-", "-", 0);
      err << fmt::format("warning: {} fit: {}\n", to_string(curve.factor), curve.fit_error);
    }
  }
  return kExitOk;
}

int cmd_evaluate(const Config& config, std::ostream& out, std::ostream& err) {
  const auto names = split_list(config.get_string("predictors", kDefaultPredictors));
  if (names.empty()) throw UsageError("--predictors is empty");
  bool stochastic = false;
  for (const auto& name : names) {
    if (!is_known_predictor(name)) throw UsageError(fmt::format("unknown predictor '{}'", name));
    if (name == "pitf" || name == "random") stochastic = true;
  }
  std::uint64_t seed = config.get_uint("seed", 0);
  if (stochastic) seed = require_seed(config, "for pitf and random");

  EvalOptions options;
  options.threads = threads_of(config);
  if (auto ks = config.get("eval.ks")) {
    options.ks.clear();
    for (const auto& k : split_list(*ks)) {
      std::size_t value = 0;
      const auto [end, ec] = std::from_chars(k.data(), k.data() + k.size(), value);
      if (ec != std::errc{} || end != k.data() + k.size()) {
        throw UsageError(fmt::format("eval.ks: '{}' is not a cut-off", k));
      }
      options.ks.push_back(value);
    }
  }
  const std::string denominator = config.get_string("eval.precision_denominator", "fixed");
  if (denominator != "fixed" && denominator != "min") {
    throw UsageError("eval.precision_denominator must be fixed or min");
  }
  options.fixed_precision_denominator = denominator == "fixed";
  options.keep_queries = config.get_bool("eval.keep_queries", false);
  options.validate();
  const fs::path dir = require_out(config);

  const auto data = load_data(config);
  const auto split = chronological_split(data.folksonomy);
  const auto report = evaluate_predictors(names, split, config, seed, options);

  write_atomic(dir / "table.csv", [&](std::ostream& o) { write_table_csv(o, report); });
  write_atomic(dir / "metrics.csv", [&](std::ostream& o) { write_metrics_csv(o, report); });
  write_atomic(dir / "report.json",
               [&](std::ostream& o) { write_report_json(o, report, split.train); });

  out << fmt::format("dataset {}  split {}\n", data.name, report.split_fingerprint);
  out << fmt::format("{:<10} {:>8} {:>8}\n", "predictor", "f1@5", "ndcg@10");
  for (const auto& p : report.predictors) {
    if (p.error) {
      err << fmt::format("warning: {} failed: {}\n", p.predictor, *p.error);
      continue;
    }
    const auto* f1 = p.at(5);
    const auto* ndcg = p.at(10);
    out << fmt::format("{:<10} {:>8} {:>8}\n", p.predictor,
                       f1 ? fmt::format("{:.4f}", f1->f1) : "-",
                       ndcg ? fmt::format("{:.4f}", ndcg->ndcg) : "-");
  }
  return kExitOk;
}

int cmd_synth(const Config& config, std::ostream& out) {
  const auto params = SynthParams::from_config(config);
  const auto seed = require_seed(config, "for synth");
  const fs::path path = require_out(config);
  const auto folksonomy = synth_folksonomy(params, seed);
  write_atomic(path, [&](std::ostream& o) { write_posts(o, folksonomy); });
  const auto report = narrowness_degree(folksonomy);
  out << fmt::format("posts {}  resources {}  posts/resource {}  {}\n", report.posts,
                     report.resources, format_ratio(report), to_string(report.type));
  return kExitOk;
}

void add_common(CLI::App& sub, FlagValues& flags) {
  sub.add_option("--config", flags.config_path, "key = value settings file");
  sub.add_option("--out", flags.out, "output directory (synth: output file)");
  sub.add_option("--seed", flags.seed, "seed for stochastic components");
  sub.add_option("overrides", flags.overrides, "dotted key=value settings, e.g. bll.d=0.5");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tag reuse analysis and tag prediction"};
  app.name("tagreuse");
  app.require_subcommand(1);
  FlagValues flags;

  auto* analyze = app.add_subcommand("analyze", "pool reuse probabilities and fit power laws");
  add_common(*analyze, flags);
  analyze->add_option("--dataset", flags.dataset, "TSV dataset (default: synthetic)");
  analyze->add_option("--factor", flags.factor, "frequency, recency, context or all");
  analyze->add_option("--min-support", flags.min_support, "minimum instances per fitted point");
  analyze->add_option("--bin", flags.bin, "context pooling: raw or log2");

  auto* evaluate = app.add_subcommand("evaluate", "run the leave-newest-out prediction protocol");
  add_common(*evaluate, flags);
  evaluate->add_option("--dataset", flags.dataset, "TSV dataset (default: synthetic)");
  evaluate->add_option("--predictors", flags.predictors, "comma list of predictors");
  evaluate->add_option("--threads", flags.threads, "worker threads for scoring");

  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  add_common(*synth, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    err << "run 'tagreuse --help' for usage\n";
    return kExitUsage;
  }

  try {
    const Config config = resolve_config(flags);
    if (analyze->parsed()) return cmd_analyze(config, out, err);
    if (evaluate->parsed()) return cmd_evaluate(config, out, err);
    return cmd_synth(config, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParamError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace tagreuse
