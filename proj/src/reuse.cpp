#include "tagreuse/reuse.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>

#include <fmt/format.h>

#include "json.hpp"
#include "tagreuse/cooccurrence.hpp"

namespace tagreuse {

std::string_view to_string(ReuseFactor factor) noexcept {
  switch (factor) {
    case ReuseFactor::kFrequency:
      return "frequency";
    case ReuseFactor::kRecency:
      return "recency";
    case ReuseFactor::kContext:
      return "context";
  }
  return "unknown";
}

std::optional<ReuseFactor> parse_factor(std::string_view name) noexcept {
  if (name == "frequency") return ReuseFactor::kFrequency;
  if (name == "recency") return ReuseFactor::kRecency;
  if (name == "context") return ReuseFactor::kContext;
  return std::nullopt;
}

PowerLawFit loglog_regression(std::span<const ReusePoint> points,
                              const RegressionOptions& options) {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> ws;
  for (const auto& pt : points) {
    if (pt.x <= 0.0 || pt.n_reused == 0 || pt.n_total < options.min_support) continue;
    xs.push_back(std::log10(pt.x));
    ys.push_back(std::log10(pt.p()));
    ws.push_back(options.instance_weighted ? static_cast<double>(pt.n_total) : 1.0);
  }
  if (xs.size() < 2) throw DataError("insufficient data");

  double w_sum = 0.0;
  double x_mean = 0.0;
  double y_mean = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    w_sum += ws[i];
    x_mean += ws[i] * xs[i];
    y_mean += ws[i] * ys[i];
  }
  x_mean /= w_sum;
  y_mean /= w_sum;

  double sxx = 0.0;
  double sxy = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - x_mean;
    const double dy = ys[i] - y_mean;
    sxx += ws[i] * dx * dx;
    sxy += ws[i] * dx * dy;
    ss_tot += ws[i] * dy * dy;
  }
  if (sxx <= 0.0) throw DataError("insufficient data");

  PowerLawFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = y_mean - fit.slope * x_mean;
  fit.points = xs.size();
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss_res += ws[i] * r * r;
  }
  fit.r2 = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
  return fit;
}

namespace {

struct Counts {
  std::size_t total = 0;
  std::size_t reused = 0;
};

using Pool = std::map<std::int64_t, Counts>;

// A user's training vocabulary with usage counts and last use.
struct VocabEntry {
  TagId tag{};
  std::size_t uses = 0;
  Timestamp last_use = 0;
};

std::vector<VocabEntry> training_vocabulary(const Folksonomy& train, UserId user) {
  std::map<TagId, VocabEntry> entries;
  for (const auto& post : train.posts_of(user)) {
    for (TagId t : post.tags) {
      auto& e = entries[t];
      e.tag = t;
      ++e.uses;
      e.last_use = std::max(e.last_use, post.timestamp);
    }
  }
  std::vector<VocabEntry> out;
  out.reserve(entries.size());
  for (const auto& [tag, e] : entries) out.push_back(e);
  return out;
}

bool reused(const Post& test, TagId tag) {
  return std::binary_search(test.tags.begin(), test.tags.end(), tag);
}

void require_test_users(const ChronoSplit& split) {
  if (split.test.empty()) throw DataError("split has no test users");
}

std::int64_t log2_bucket(std::int64_t v) {
  return std::int64_t{1} << (std::bit_width(static_cast<std::uint64_t>(v)) - 1);
}

ReuseCurve finish(ReuseFactor factor, const Pool& pool, const PoolOptions& options) {
  ReuseCurve curve;
  curve.factor = factor;
  curve.points.reserve(pool.size());
  for (const auto& [x, c] : pool) {
    curve.points.push_back(ReusePoint{static_cast<double>(x), c.total, c.reused});
  }
  try {
    curve.fit = loglog_regression(curve.points, options.regression);
  } catch (const DataError& e) {
    curve.fit_error = e.what();
  }
  return curve;
}

}  // namespace

ReuseCurve pool_by_frequency(const ChronoSplit& split, const PoolOptions& options) {
  require_test_users(split);
  Pool pool;
  for (const auto& test : split.test) {
    for (const auto& e : training_vocabulary(split.train, test.user)) {
      auto& c = pool[static_cast<std::int64_t>(e.uses)];
      ++c.total;
      if (reused(test, e.tag)) ++c.reused;
    }
  }
  return finish(ReuseFactor::kFrequency, pool, options);
}

ReuseCurve pool_by_recency(const ChronoSplit& split, const PoolOptions& options) {
  require_test_users(split);
  Pool pool;
  for (const auto& test : split.test) {
    for (const auto& e : training_vocabulary(split.train, test.user)) {
      const Timestamp lag = test.timestamp - e.last_use;
      const auto days = std::max<std::int64_t>(1, lag / static_cast<std::int64_t>(kSecondsPerDay));
      auto& c = pool[days];
      ++c.total;
      if (reused(test, e.tag)) ++c.reused;
    }
  }
  return finish(ReuseFactor::kRecency, pool, options);
}

ReuseCurve pool_by_context(const ChronoSplit& split, const PoolOptions& options) {
  require_test_users(split);
  const CoocMatrix cooc(split.train);
  Pool pool;
  for (const auto& test : split.test) {
    const auto context = resource_context(split.train, test.resource, test.user);
    if (context.empty()) continue;
    for (const auto& e : training_vocabulary(split.train, test.user)) {
      std::int64_t v = 0;
      for (const auto& c : context) {
        v += static_cast<std::int64_t>(c.count) * cooc.count(c.tag, e.tag);
      }
      if (v <= 0) continue;
      auto& c = pool[options.context_binning == Binning::kLog2 ? log2_bucket(v) : v];
      ++c.total;
      if (reused(test, e.tag)) ++c.reused;
    }
  }
  return finish(ReuseFactor::kContext, pool, options);
}

ReuseCurve pool_reuse(ReuseFactor factor, const ChronoSplit& split, const PoolOptions& options) {
  switch (factor) {
    case ReuseFactor::kFrequency:
      return pool_by_frequency(split, options);
    case ReuseFactor::kRecency:
      return pool_by_recency(split, options);
    case ReuseFactor::kContext:
      return pool_by_context(split, options);
  }
  throw ParamError("unknown reuse factor");
}

void write_curve_csv(std::ostream& out, const ReuseCurve& curve) {
  out << "x,n_total,n_reused,p\n";
  for (const auto& pt : curve.points) {
    out << fmt::format("{},{},{},{:.17g}\n", pt.x, pt.n_total, pt.n_reused, pt.p());
  }
}

void write_curve_json(std::ostream& out, const ReuseCurve& curve, std::string_view dataset,
                      std::string_view split_fingerprint) {
  nlohmann::ordered_json doc;
  doc["format_version"] = 1;
  doc["dataset"] = std::string(dataset);
  doc["split_fingerprint"] = std::string(split_fingerprint);
  doc["factor"] = std::string(to_string(curve.factor));
  if (curve.fit) {
    doc["k"] = curve.fit->slope;
    doc["b"] = curve.fit->intercept;
    doc["r2"] = curve.fit->r2;
    doc["points"] = curve.fit->points;
  } else {
    doc["k"] = nullptr;
    doc["b"] = nullptr;
    doc["r2"] = nullptr;
    doc["points"] = 0;
    doc["error"] = curve.fit_error;
  }
  doc["pooled_points"] = curve.points.size();
  out << doc.dump(2) << '\n';
}

}  // namespace tagreuse
