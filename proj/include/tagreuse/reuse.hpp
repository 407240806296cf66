#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tagreuse/split.hpp"

namespace tagreuse {

enum class ReuseFactor { kFrequency, kRecency, kContext };

std::string_view to_string(ReuseFactor factor) noexcept;
std::optional<ReuseFactor> parse_factor(std::string_view name) noexcept;

// Pooling key for the context factor. kLog2 pools v into the bucket
// [2^j, 2^(j+1)) and reports x = 2^j.
enum class Binning { kRaw, kLog2 };

// All tag instances of all test users that share one factor value.
struct ReusePoint {
  double x = 0.0;
  std::size_t n_total = 0;
  std::size_t n_reused = 0;

  double p() const noexcept {
    return n_total == 0 ? 0.0 : static_cast<double>(n_reused) / static_cast<double>(n_total);
  }
  bool operator==(const ReusePoint&) const = default;
};

// Least squares of log10(p) on log10(x): log10 p = slope * log10 x + intercept.
struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t points = 0;
};

struct RegressionOptions {
  // Points with fewer pooled instances are left out of the fit.
  std::size_t min_support = 1;
  // Weight each point by n_total instead of fitting pooled points equally.
  bool instance_weighted = false;
};

// Fits the points with x > 0, p > 0 and enough support. r2 is 1 when every
// eligible log10(p) is equal. Throws DataError("insufficient data") with fewer
// than two eligible points or when all eligible x coincide.
PowerLawFit loglog_regression(std::span<const ReusePoint> points,
                              const RegressionOptions& options = {});

struct ReuseCurve {
  ReuseFactor factor = ReuseFactor::kFrequency;
  // Ascending by x, including zero-probability points.
  std::vector<ReusePoint> points;
  std::optional<PowerLawFit> fit;
  // Why fit is missing, when it is.
  std::string fit_error;
};

struct PoolOptions {
  Binning context_binning = Binning::kRaw;
  RegressionOptions regression;
};

// x = number of u's training posts carrying the tag. Throws DataError when
// the split has no test users.
ReuseCurve pool_by_frequency(const ChronoSplit& split, const PoolOptions& options = {});

// x = max(1, floor(days between the last training use and the test post)).
ReuseCurve pool_by_recency(const ChronoSplit& split, const PoolOptions& options = {});

// x = sum over the foreign tags c already on the test resource (with
// multiplicity) of cooc(c, i), for tags i with x > 0. Posts without foreign
// context add nothing, so the curve may be empty.
ReuseCurve pool_by_context(const ChronoSplit& split, const PoolOptions& options = {});

ReuseCurve pool_reuse(ReuseFactor factor, const ChronoSplit& split,
                      const PoolOptions& options = {});

// CSV with header x,n_total,n_reused,p.
void write_curve_csv(std::ostream& out, const ReuseCurve& curve);
// {"factor", "k", "b", "r2", "points", ...}; k, b, r2 are null without a fit.
void write_curve_json(std::ostream& out, const ReuseCurve& curve, std::string_view dataset,
                      std::string_view split_fingerprint);

}  // namespace tagreuse
