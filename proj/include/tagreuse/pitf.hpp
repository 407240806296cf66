#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "tagreuse/predictor.hpp"

namespace tagreuse {

// Pairwise interaction tensor factorization:
//   y(u, r, t) = <U[u], TU[t]> + <R[r], TR[t]>
// Factor tables are row-major with `factors` columns.
struct PitfModel {
  std::size_t factors = 0;
  std::size_t num_users = 0;
  std::size_t num_resources = 0;
  std::size_t num_tags = 0;
  std::uint64_t seed = 0;
  std::vector<double> user;
  std::vector<double> resource;
  std::vector<double> tag_user;
  std::vector<double> tag_resource;

  std::span<double> user_row(std::size_t u) { return row(user, u); }
  std::span<double> resource_row(std::size_t r) { return row(resource, r); }
  std::span<double> tag_user_row(std::size_t t) { return row(tag_user, t); }
  std::span<double> tag_resource_row(std::size_t t) { return row(tag_resource, t); }
  std::span<const double> user_row(std::size_t u) const { return row(user, u); }
  std::span<const double> resource_row(std::size_t r) const { return row(resource, r); }
  std::span<const double> tag_user_row(std::size_t t) const { return row(tag_user, t); }
  std::span<const double> tag_resource_row(std::size_t t) const { return row(tag_resource, t); }

  bool operator==(const PitfModel&) const = default;

 private:
  std::span<double> row(std::vector<double>& table, std::size_t i) {
    return std::span<double>(table).subspan(i * factors, factors);
  }
  std::span<const double> row(const std::vector<double>& table, std::size_t i) const {
    return std::span<const double>(table).subspan(i * factors, factors);
  }
};

// Entries drawn i.i.d. from N(0, 0.01^2) by a generator seeded with `seed`.
PitfModel init_model(std::size_t num_users, std::size_t num_resources, std::size_t num_tags,
                     std::size_t factors, std::uint64_t seed);

// Throws ParamError for out-of-range ids.
double pitf_score(const PitfModel& model, UserId user, ResourceId resource, TagId tag);

// Gradient of ln sigma(x) - gamma/2 * |theta|^2 for x = y(u,r,pos) - y(u,r,neg),
// over the six factor rows the pair touches.
struct BprGradient {
  double x = 0.0;
  std::vector<double> user;
  std::vector<double> resource;
  std::vector<double> tag_user_pos;
  std::vector<double> tag_user_neg;
  std::vector<double> tag_resource_pos;
  std::vector<double> tag_resource_neg;
};

BprGradient bpr_gradient(const PitfModel& model, UserId user, ResourceId resource,
                         TagId positive, TagId negative, double gamma);

// One stochastic ascent step theta += alpha * gradient. Only the rows of
// user, resource, positive and negative change. Returns x before the step.
double bpr_step(PitfModel& model, UserId user, ResourceId resource, TagId positive,
                TagId negative, double alpha, double gamma);

struct TrainConfig {
  double learn_rate = 0.05;
  double regularization = 5e-5;
  int epochs = 100;
  int negatives = 1;
  std::uint64_t seed = 42;

  void validate() const;
};

struct TrainStats {
  std::size_t steps = 0;
  // Mean -ln sigma(x) over the steps of each epoch, measured before each step.
  std::vector<double> epoch_loss;
};

// Per epoch: every (post, tag) incidence in a seeded shuffled order, each
// paired with `negatives` tags drawn uniformly from the tag vocabulary outside
// the post. Throws DataError when the vocabulary has fewer than two tags.
TrainStats train(PitfModel& model, const Folksonomy& train, const TrainConfig& config);

struct BprSample {
  UserId user{};
  ResourceId resource{};
  TagId positive{};
  TagId negative{};
};

// Draws a fixed set of (post, positive, negative) quadruples for loss tracking.
std::vector<BprSample> sample_bpr_pairs(const Folksonomy& train, std::size_t count,
                                        std::uint64_t seed);
// Mean -ln sigma(x) over the samples.
double bpr_loss(const PitfModel& model, std::span<const BprSample> samples);

// Binary checkpoint: 8-byte magic "TAGPITF1", u32 version, u32 reserved,
// u64 factors/users/resources/tags/seed, then the four tables as
// little-endian IEEE doubles in row-major order.
void write_model(std::ostream& out, const PitfModel& model);
PitfModel read_model(std::istream& in);
void save_model(const std::filesystem::path& path, const PitfModel& model);
PitfModel load_model(const std::filesystem::path& path);

class PitfPredictor final : public TagPredictor {
 public:
  PitfPredictor(std::size_t factors, TrainConfig config);

  std::string name() const override { return "pitf"; }
  void fit(const Folksonomy& train) override;
  TagScores score(UserId user, ResourceId resource, Timestamp reference_time) const override;

  const PitfModel& model() const noexcept { return model_; }

 private:
  std::size_t factors_;
  TrainConfig config_;
  PitfModel model_;
  std::vector<TagId> tags_;
};

}  // namespace tagreuse
