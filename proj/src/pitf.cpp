#include "tagreuse/pitf.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <string>

namespace tagreuse {

PitfModel init_model(std::size_t num_users, std::size_t num_resources, std::size_t num_tags,
                     std::size_t factors, std::uint64_t seed) {
  if (factors < 1) throw ParamError("PITF needs at least one factor");
  if (num_users < 1 || num_resources < 1 || num_tags < 1) {
    throw ParamError("PITF table sizes must be >= 1");
  }
  PitfModel m;
  m.factors = factors;
  m.num_users = num_users;
  m.num_resources = num_resources;
  m.num_tags = num_tags;
  m.seed = seed;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 0.01);
  auto fill = [&](std::vector<double>& table, std::size_t rows) {
    table.resize(rows * factors);
    for (double& v : table) v = normal(rng);
  };
  fill(m.user, num_users);
  fill(m.resource, num_resources);
  fill(m.tag_user, num_tags);
  fill(m.tag_resource, num_tags);
  return m;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t f = 0; f < a.size(); ++f) s += a[f] * b[f];
  return s;
}

void check_ids(const PitfModel& m, std::size_t u, std::size_t r, std::size_t t) {
  if (u >= m.num_users || r >= m.num_resources || t >= m.num_tags) {
    throw ParamError("PITF index out of range");
  }
}

double sigmoid_neg(double x) {
  // 1 / (1 + e^x), evaluated without overflow.
  if (x >= 0.0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

double neg_log_sigmoid(double x) {
  // -ln sigma(x) = ln(1 + e^-x)
  return x > 0.0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

}  // namespace

double pitf_score(const PitfModel& model, UserId user, ResourceId resource, TagId tag) {
  const std::size_t u = index_of(user);
  const std::size_t r = index_of(resource);
  const std::size_t t = index_of(tag);
  check_ids(model, u, r, t);
  return dot(model.user_row(u), model.tag_user_row(t)) +
         dot(model.resource_row(r), model.tag_resource_row(t));
}

BprGradient bpr_gradient(const PitfModel& model, UserId user, ResourceId resource,
                         TagId positive, TagId negative, double gamma) {
  const std::size_t u = index_of(user);
  const std::size_t r = index_of(resource);
  const std::size_t p = index_of(positive);
  const std::size_t n = index_of(negative);
  check_ids(model, u, r, p);
  check_ids(model, u, r, n);
  if (p == n) throw ParamError("positive and negative tag must differ");

  const auto uu = model.user_row(u);
  const auto rr = model.resource_row(r);
  const auto tup = model.tag_user_row(p);
  const auto tun = model.tag_user_row(n);
  const auto trp = model.tag_resource_row(p);
  const auto trn = model.tag_resource_row(n);

  BprGradient g;
  g.x = dot(uu, tup) - dot(uu, tun) + dot(rr, trp) - dot(rr, trn);
  const double delta = sigmoid_neg(g.x);
  const std::size_t k = model.factors;
  g.user.resize(k);
  g.resource.resize(k);
  g.tag_user_pos.resize(k);
  g.tag_user_neg.resize(k);
  g.tag_resource_pos.resize(k);
  g.tag_resource_neg.resize(k);
  for (std::size_t f = 0; f < k; ++f) {
    g.user[f] = delta * (tup[f] - tun[f]) - gamma * uu[f];
    g.resource[f] = delta * (trp[f] - trn[f]) - gamma * rr[f];
    g.tag_user_pos[f] = delta * uu[f] - gamma * tup[f];
    g.tag_user_neg[f] = -delta * uu[f] - gamma * tun[f];
    g.tag_resource_pos[f] = delta * rr[f] - gamma * trp[f];
    g.tag_resource_neg[f] = -delta * rr[f] - gamma * trn[f];
  }
  return g;
}

double bpr_step(PitfModel& model, UserId user, ResourceId resource, TagId positive,
                TagId negative, double alpha, double gamma) {
  const BprGradient g = bpr_gradient(model, user, resource, positive, negative, gamma);
  auto apply = [alpha](std::span<double> row, const std::vector<double>& grad) {
    for (std::size_t f = 0; f < row.size(); ++f) row[f] += alpha * grad[f];
  };
  apply(model.user_row(index_of(user)), g.user);
  apply(model.resource_row(index_of(resource)), g.resource);
  apply(model.tag_user_row(index_of(positive)), g.tag_user_pos);
  apply(model.tag_user_row(index_of(negative)), g.tag_user_neg);
  apply(model.tag_resource_row(index_of(positive)), g.tag_resource_pos);
  apply(model.tag_resource_row(index_of(negative)), g.tag_resource_neg);
  return g.x;
}

void TrainConfig::validate() const {
  if (!(learn_rate > 0.0)) throw ParamError("pitf learn rate must be > 0");
  if (!(regularization >= 0.0)) throw ParamError("pitf regularization must be >= 0");
  if (epochs < 1) throw ParamError("pitf epochs must be >= 1");
  if (negatives < 1) throw ParamError("pitf negatives per positive must be >= 1");
}

namespace {

struct Incidence {
  std::uint32_t post;
  TagId tag;
};

std::vector<Incidence> incidences(const Folksonomy& train) {
  std::vector<Incidence> out;
  out.reserve(train.num_tag_assignments());
  const auto posts = train.posts();
  for (std::size_t i = 0; i < posts.size(); ++i) {
    for (TagId t : posts[i].tags) out.push_back(Incidence{static_cast<std::uint32_t>(i), t});
  }
  return out;
}

// Every id of the (possibly shared) tag vocabulary, so tags held out in a
// split still act as negatives.
std::vector<TagId> tag_space_ids(const Folksonomy& train) {
  std::vector<TagId> ids(train.tag_space());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = id_at<TagId>(i);
  return ids;
}

// Uniform over `tags` minus the post's own tags. Returns false when the post
// carries every tag.
bool draw_negative(std::mt19937_64& rng, const std::vector<TagId>& tags, const Post& post,
                   TagId& out) {
  if (post.tags.size() >= tags.size()) return false;
  std::uniform_int_distribution<std::size_t> pick(0, tags.size() - 1);
  while (true) {
    const TagId candidate = tags[pick(rng)];
    if (!std::binary_search(post.tags.begin(), post.tags.end(), candidate)) {
      out = candidate;
      return true;
    }
  }
}

}  // namespace

TrainStats train(PitfModel& model, const Folksonomy& train, const TrainConfig& config) {
  config.validate();
  if (train.empty()) throw DataError("cannot train PITF on an empty folksonomy");
  const std::vector<TagId> tags = tag_space_ids(train);
  if (tags.size() < 2) throw DataError("PITF needs at least two tags to sample negatives");
  if (model.num_users < train.user_space() || model.num_resources < train.resource_space() ||
      model.num_tags < train.tag_space()) {
    throw ParamError("PITF model is smaller than the training id space");
  }

  std::vector<Incidence> order = incidences(train);
  std::mt19937_64 rng(config.seed);
  const auto posts = train.posts();
  TrainStats stats;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss = 0.0;
    std::size_t steps = 0;
    for (const auto& inc : order) {
      const Post& post = posts[inc.post];
      for (int s = 0; s < config.negatives; ++s) {
        TagId negative{};
        if (!draw_negative(rng, tags, post, negative)) break;
        const double x = bpr_step(model, post.user, post.resource, inc.tag, negative,
                                  config.learn_rate, config.regularization);
        loss += neg_log_sigmoid(x);
        ++steps;
      }
    }
    stats.steps += steps;
    stats.epoch_loss.push_back(steps > 0 ? loss / static_cast<double>(steps) : 0.0);
  }
  return stats;
}

std::vector<BprSample> sample_bpr_pairs(const Folksonomy& train, std::size_t count,
                                        std::uint64_t seed) {
  const std::vector<TagId> tags = tag_space_ids(train);
  const std::vector<Incidence> all = incidences(train);
  std::vector<BprSample> out;
  if (all.empty() || tags.size() < 2) return out;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
  const auto posts = train.posts();
  std::size_t attempts = 0;
  while (out.size() < count && attempts < 100 * count + 100) {
    ++attempts;
    const auto& inc = all[pick(rng)];
    const Post& post = posts[inc.post];
    TagId negative{};
    if (!draw_negative(rng, tags, post, negative)) continue;
    out.push_back(BprSample{post.user, post.resource, inc.tag, negative});
  }
  return out;
}

double bpr_loss(const PitfModel& model, std::span<const BprSample> samples) {
  if (samples.empty()) return 0.0;
  double loss = 0.0;
  for (const auto& s : samples) {
    const double x = pitf_score(model, s.user, s.resource, s.positive) -
                     pitf_score(model, s.user, s.resource, s.negative);
    loss += neg_log_sigmoid(x);
  }
  return loss / static_cast<double>(samples.size());
}

namespace {

constexpr std::array<char, 8> kMagic = {'T', 'A', 'G', 'P', 'I', 'T', 'F', '1'};
constexpr std::uint32_t kVersion = 1;

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> b{};
  for (std::size_t i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b.data(), b.size());
}

void put_u32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> b{};
  for (std::size_t i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b.data(), b.size());
}

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), b.size())) {
    throw DataError("truncated PITF checkpoint");
  }
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), b.size())) {
    throw DataError("truncated PITF checkpoint");
  }
  std::uint32_t v = 0;
  for (std::size_t i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

void put_table(std::ostream& out, const std::vector<double>& table) {
  for (double v : table) put_u64(out, std::bit_cast<std::uint64_t>(v));
}

void get_table(std::istream& in, std::vector<double>& table, std::size_t size) {
  table.resize(size);
  for (double& v : table) v = std::bit_cast<double>(get_u64(in));
}

}  // namespace

void write_model(std::ostream& out, const PitfModel& model) {
  out.write(kMagic.data(), kMagic.size());
  put_u32(out, kVersion);
  put_u32(out, 0);
  put_u64(out, model.factors);
  put_u64(out, model.num_users);
  put_u64(out, model.num_resources);
  put_u64(out, model.num_tags);
  put_u64(out, model.seed);
  put_table(out, model.user);
  put_table(out, model.resource);
  put_table(out, model.tag_user);
  put_table(out, model.tag_resource);
}

PitfModel read_model(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw DataError("not a PITF checkpoint");
  }
  if (get_u32(in) != kVersion) throw DataError("unsupported PITF checkpoint version");
  get_u32(in);
  PitfModel m;
  m.factors = get_u64(in);
  m.num_users = get_u64(in);
  m.num_resources = get_u64(in);
  m.num_tags = get_u64(in);
  m.seed = get_u64(in);
  get_table(in, m.user, m.num_users * m.factors);
  get_table(in, m.resource, m.num_resources * m.factors);
  get_table(in, m.tag_user, m.num_tags * m.factors);
  get_table(in, m.tag_resource, m.num_tags * m.factors);
  return m;
}

void save_model(const std::filesystem::path& path, const PitfModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  write_model(out, model);
}

PitfModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return read_model(in);
}

PitfPredictor::PitfPredictor(std::size_t factors, TrainConfig config)
    : factors_(factors), config_(config) {
  if (factors_ < 1) throw ParamError("pitf.k must be >= 1");
  config_.validate();
}

void PitfPredictor::fit(const Folksonomy& train) {
  model_ = init_model(std::max<std::size_t>(train.user_space(), 1),
                      std::max<std::size_t>(train.resource_space(), 1),
                      std::max<std::size_t>(train.tag_space(), 1), factors_,
                      config_.seed ^ 0x9e3779b97f4a7c15ULL);
  tagreuse::train(model_, train, config_);
  tags_ = train.used_tags();
}

TagScores PitfPredictor::score(UserId user, ResourceId resource, Timestamp) const {
  TagScores out;
  if (index_of(user) >= model_.num_users || index_of(resource) >= model_.num_resources) {
    return out;
  }
  out.reserve(tags_.size());
  for (TagId t : tags_) out.emplace(t, pitf_score(model_, user, resource, t));
  return out;
}

}  // namespace tagreuse
