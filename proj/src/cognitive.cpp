#include "tagreuse/cognitive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace tagreuse {

void BllParams::validate() const {
  if (!(d >= 0.0) || !std::isfinite(d)) throw ParamError("bll.d must be a finite value >= 0");
  if (!(beta >= 0.0 && beta <= 1.0)) throw ParamError("bllac.beta must lie in [0, 1]");
}

void GirpParams::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ParamError("girp.lambda must be > 0");
}

UsageHistory::UsageHistory(const Folksonomy& train) : per_user_(train.user_space()) {
  std::map<TagId, std::vector<Timestamp>> by_tag;
  for (std::size_t u = 0; u < train.user_space(); ++u) {
    auto posts = train.posts_of(id_at<UserId>(u));
    if (posts.empty()) continue;
    by_tag.clear();
    for (const auto& post : posts) {
      for (TagId t : post.tags) by_tag[t].push_back(post.timestamp);
    }
    auto& out = per_user_[u];
    out.reserve(by_tag.size());
    for (auto& [tag, times] : by_tag) out.push_back(TagUsage{tag, std::move(times)});
  }
}

std::span<const TagUsage> UsageHistory::of(UserId user) const {
  const std::size_t u = index_of(user);
  if (u >= per_user_.size()) return {};
  return per_user_[u];
}

TagScores mp_score(const UsageHistory& history, UserId user) {
  TagScores out;
  for (const auto& usage : history.of(user)) {
    out.emplace(usage.tag, static_cast<double>(usage.times.size()));
  }
  return out;
}

TagScores recency_rank(const UsageHistory& history, UserId user) {
  TagScores out;
  for (const auto& usage : history.of(user)) {
    out.emplace(usage.tag, static_cast<double>(usage.times.back()));
  }
  return out;
}

namespace {

double lag_seconds(Timestamp reference_time, Timestamp used_at) {
  return static_cast<double>(std::max<Timestamp>(reference_time - used_at, 1));
}

}  // namespace

TagScores bll_activation(const UsageHistory& history, UserId user, Timestamp reference_time,
                         double d) {
  // Summed in log space so large d cannot underflow the sum to zero.
  TagScores out;
  std::vector<double> terms;
  for (const auto& usage : history.of(user)) {
    terms.clear();
    double max = -std::numeric_limits<double>::infinity();
    for (Timestamp t : usage.times) {
      terms.push_back(-d * std::log(lag_seconds(reference_time, t)));
      max = std::max(max, terms.back());
    }
    double sum = 0.0;
    for (double term : terms) sum += std::exp(term - max);
    out.emplace(usage.tag, max + std::log(sum));
  }
  return out;
}

TagScores girp_score(const UsageHistory& history, UserId user, Timestamp reference_time,
                     double lambda) {
  constexpr double kFloor = 1e-12;
  TagScores out;
  for (const auto& usage : history.of(user)) {
    double sum = 0.0;
    for (Timestamp t : usage.times) {
      sum += std::exp(-lambda * lag_seconds(reference_time, t) / kSecondsPerDay);
    }
    out.emplace(usage.tag, std::log(sum + kFloor));
  }
  return out;
}

TagScores semcon_score(std::span<const TagCount> context, const CoocMatrix& cooc) {
  TagScores out;
  for (const auto& c : context) {
    for (const auto& neighbour : cooc.row(c.tag)) {
      out[neighbour.tag] += static_cast<double>(c.count) * static_cast<double>(neighbour.count);
    }
  }
  return out;
}

TagScores max_normalize(const TagScores& scores) {
  if (scores.empty()) return {};
  double max = -std::numeric_limits<double>::infinity();
  for (const auto& [tag, score] : scores) max = std::max(max, score);
  TagScores out;
  out.reserve(scores.size());
  for (const auto& [tag, score] : scores) out.emplace(tag, max > 0.0 ? score / max : 0.0);
  return out;
}

TagScores max_normalize_log(const TagScores& log_scores) {
  if (log_scores.empty()) return {};
  double max = -std::numeric_limits<double>::infinity();
  for (const auto& [tag, score] : log_scores) max = std::max(max, score);
  TagScores out;
  out.reserve(log_scores.size());
  for (const auto& [tag, score] : log_scores) out.emplace(tag, std::exp(score - max));
  return out;
}

TagScores combine_bll_context(const TagScores& bll, const TagScores& context, double beta) {
  TagScores out;
  for (const auto& [tag, value] : max_normalize_log(bll)) out[tag] += beta * value;
  for (const auto& [tag, value] : max_normalize(context)) out[tag] += (1.0 - beta) * value;
  return out;
}

TagScores bll_ac_score(const UsageHistory& history, std::span<const TagCount> context,
                       const CoocMatrix& cooc, UserId user, Timestamp reference_time,
                       const BllParams& params) {
  return combine_bll_context(bll_activation(history, user, reference_time, params.d),
                             semcon_score(context, cooc), params.beta);
}

void MostPopularUserPredictor::fit(const Folksonomy& train) { history_ = UsageHistory(train); }

TagScores MostPopularUserPredictor::score(UserId user, ResourceId, Timestamp) const {
  return mp_score(history_, user);
}

void RecencyPredictor::fit(const Folksonomy& train) { history_ = UsageHistory(train); }

TagScores RecencyPredictor::score(UserId user, ResourceId, Timestamp) const {
  return recency_rank(history_, user);
}

void SemConPredictor::fit(const Folksonomy& train) {
  train_ = std::make_shared<const Folksonomy>(train);
  cooc_ = CoocMatrix(train);
}

TagScores SemConPredictor::score(UserId user, ResourceId resource, Timestamp) const {
  return semcon_score(resource_context(*train_, resource, user), cooc_);
}

BllPredictor::BllPredictor(BllParams params) : params_(params) { params_.validate(); }

void BllPredictor::fit(const Folksonomy& train) { history_ = UsageHistory(train); }

TagScores BllPredictor::score(UserId user, ResourceId, Timestamp reference_time) const {
  return bll_activation(history_, user, reference_time, params_.d);
}

GirpPredictor::GirpPredictor(GirpParams params) : params_(params) { params_.validate(); }

void GirpPredictor::fit(const Folksonomy& train) { history_ = UsageHistory(train); }

TagScores GirpPredictor::score(UserId user, ResourceId, Timestamp reference_time) const {
  return girp_score(history_, user, reference_time, params_.lambda);
}

BllAcPredictor::BllAcPredictor(BllParams params) : params_(params) { params_.validate(); }

void BllAcPredictor::fit(const Folksonomy& train) {
  history_ = UsageHistory(train);
  train_ = std::make_shared<const Folksonomy>(train);
  cooc_ = CoocMatrix(train);
}

TagScores BllAcPredictor::score(UserId user, ResourceId resource,
                                Timestamp reference_time) const {
  return bll_ac_score(history_, resource_context(*train_, resource, user), cooc_, user,
                      reference_time, params_);
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

void RandomPredictor::fit(const Folksonomy& train) { tags_ = train.used_tags(); }

TagScores RandomPredictor::score(UserId user, ResourceId resource, Timestamp) const {
  const std::uint64_t query =
      splitmix64(splitmix64(seed_ ^ index_of(user)) ^ (index_of(resource) * 0x2545f4914f6cdd1dULL));
  TagScores out;
  out.reserve(tags_.size());
  for (TagId t : tags_) {
    const std::uint64_t h = splitmix64(query ^ index_of(t));
    out.emplace(t, static_cast<double>(h >> 11) * 0x1.0p-53);
  }
  return out;
}

}  // namespace tagreuse
