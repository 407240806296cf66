#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "tagreuse/cooccurrence.hpp"
#include "tagreuse/predictor.hpp"

namespace tagreuse {

struct BllParams {
  // Power-law decay exponent.
  double d = 0.5;
  // Weight of the base-level term in BLL_AC; 1 - beta goes to the context.
  double beta = 0.5;

  void validate() const;
};

struct GirpParams {
  // Exponential decay rate, per day.
  double lambda = 0.1;

  void validate() const;
};

// Past usages of one tag by one user, timestamps ascending.
struct TagUsage {
  TagId tag{};
  std::vector<Timestamp> times;
};

// Per-user tag usage histories of a training folksonomy.
class UsageHistory {
 public:
  UsageHistory() = default;
  explicit UsageHistory(const Folksonomy& train);

  // Sorted by tag id; empty for users without training posts.
  std::span<const TagUsage> of(UserId user) const;

 private:
  std::vector<std::vector<TagUsage>> per_user_;
};

// Number of u's posts carrying each tag.
TagScores mp_score(const UsageHistory& history, UserId user);

// Last usage time of each tag, in seconds.
TagScores recency_rank(const UsageHistory& history, UserId user);

// ln( sum_j max(t_ref - t_j, 1s)^-d ) per tag.
TagScores bll_activation(const UsageHistory& history, UserId user, Timestamp reference_time,
                         double d);

// ln( sum_j exp(-lambda * dt_j) + 1e-12 ), dt_j in days with the same 1s floor.
TagScores girp_score(const UsageHistory& history, UserId user, Timestamp reference_time,
                     double lambda);

// sum over context tags c (with multiplicity) of cooc(c, i).
TagScores semcon_score(std::span<const TagCount> context, const CoocMatrix& cooc);

// Scales the map into [0, 1] by its maximum. Empty stays empty.
TagScores max_normalize(const TagScores& scores);
// Max-normalization for log-activations: exp(B - max B), which is the linear
// activation divided by its maximum.
TagScores max_normalize_log(const TagScores& log_scores);

// beta * norm(B) + (1 - beta) * norm(S) over the union of supports.
TagScores combine_bll_context(const TagScores& bll, const TagScores& context, double beta);

TagScores bll_ac_score(const UsageHistory& history, std::span<const TagCount> context,
                       const CoocMatrix& cooc, UserId user, Timestamp reference_time,
                       const BllParams& params);

class MostPopularUserPredictor final : public TagPredictor {
 public:
  std::string name() const override { return "mp"; }
  void fit(const Folksonomy& train) override;
  TagScores score(UserId user, ResourceId resource, Timestamp reference_time) const override;

 private:
  UsageHistory history_;
};

class RecencyPredictor final : public TagPredictor {
 public:
  std::string name() const override { return "recency"; }
  void fit(const Folksonomy& train) override;
  TagScores score(UserId user, ResourceId resource, Timestamp reference_time) const override;

 private:
  UsageHistory history_;
};

class SemConPredictor final : public TagPredictor {
 public:
  std::string name() const override { return "semcon"; }
  void fit(const Folksonomy& train) override;
  TagScores score(UserId user, ResourceId resource, Timestamp reference_time) const override;

 private:
  std::shared_ptr<const Folksonomy> train_;
  CoocMatrix cooc_;
};

class BllPredictor final : public TagPredictor {
 public:
  explicit BllPredictor(BllParams params = {});

  std::string name() const override { return "bll"; }
  void fit(const Folksonomy& train) override;
  TagScores score(UserId user, ResourceId resource, Timestamp reference_time) const override;

 private:
  BllParams params_;
  UsageHistory history_;
};

class GirpPredictor final : public TagPredictor {
 public:
  explicit GirpPredictor(GirpParams params = {});

  std::string name() const override { return "girp"; }
  void fit(const Folksonomy& train) override;
  TagScores score(UserId user, ResourceId resource, Timestamp reference_time) const override;

 private:
  GirpParams params_;
  UsageHistory history_;
};

class BllAcPredictor final : public TagPredictor {
 public:
  explicit BllAcPredictor(BllParams params = {});

  std::string name() const override { return "bllac"; }
  void fit(const Folksonomy& train) override;
  TagScores score(UserId user, ResourceId resource, Timestamp reference_time) const override;

 private:
  BllParams params_;
  UsageHistory history_;
  std::shared_ptr<const Folksonomy> train_;
  CoocMatrix cooc_;
};

// Uniform pseudo-random scores over every training tag. The score is a hash of
// (seed, user, resource, tag), so queries stay pure and reproducible.
class RandomPredictor final : public TagPredictor {
 public:
  explicit RandomPredictor(std::uint64_t seed) : seed_(seed) {}

  std::string name() const override { return "random"; }
  void fit(const Folksonomy& train) override;
  TagScores score(UserId user, ResourceId resource, Timestamp reference_time) const override;

 private:
  std::uint64_t seed_;
  std::vector<TagId> tags_;
};

}  // namespace tagreuse
