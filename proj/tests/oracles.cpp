#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace oracle {

using tagreuse::Post;
using tagreuse::index_of;

PostRecord rec(std::string user, std::string resource, tagreuse::Timestamp t,
               std::vector<std::string> tags) {
  return PostRecord{std::move(user), std::move(resource), t, std::move(tags)};
}

TagId tag(const Folksonomy& f, std::string_view name) {
  auto t = f.find_tag(name);
  if (!t) throw std::logic_error("no tag " + std::string(name));
  return *t;
}

tagreuse::UserId user(const Folksonomy& f, std::string_view name) {
  auto u = f.find_user(name);
  if (!u) throw std::logic_error("no user " + std::string(name));
  return *u;
}

tagreuse::ResourceId resource(const Folksonomy& f, std::string_view name) {
  auto r = f.find_resource(name);
  if (!r) throw std::logic_error("no resource " + std::string(name));
  return *r;
}

Folksonomy random_folksonomy(std::mt19937_64& rng, std::size_t max_posts, std::size_t users,
                             std::size_t resources, std::size_t tags) {
  std::uniform_int_distribution<std::size_t> n_posts(2, max_posts);
  std::uniform_int_distribution<std::size_t> pick_user(0, users - 1);
  std::uniform_int_distribution<std::size_t> pick_resource(0, resources - 1);
  std::uniform_int_distribution<std::size_t> pick_tag(0, tags - 1);
  std::uniform_int_distribution<std::size_t> n_tags(1, std::min<std::size_t>(4, tags));
  std::uniform_int_distribution<tagreuse::Timestamp> day(0, 400);
  std::uniform_int_distribution<tagreuse::Timestamp> second(0, 86399);
  std::vector<PostRecord> records;
  const std::size_t n = n_posts(rng);
  for (std::size_t i = 0; i < n; ++i) {
    PostRecord r;
    r.user = "u" + std::to_string(pick_user(rng));
    r.resource = "r" + std::to_string(pick_resource(rng));
    r.timestamp = 1'000'000'000 + day(rng) * 86400 + second(rng);
    const std::size_t k = n_tags(rng);
    for (std::size_t j = 0; j < k; ++j) r.tags.push_back("t" + std::to_string(pick_tag(rng)));
    records.push_back(std::move(r));
  }
  return Folksonomy::from_records(std::move(records));
}

namespace {

std::set<TagId> head(const std::vector<TagId>& predicted, std::size_t k) {
  std::set<TagId> out;
  for (std::size_t i = 0; i < predicted.size() && i < k; ++i) out.insert(predicted[i]);
  return out;
}

std::size_t hits(const std::vector<TagId>& predicted, const std::set<TagId>& relevant,
                 std::size_t k) {
  std::vector<TagId> common;
  const auto top = head(predicted, k);
  std::set_intersection(top.begin(), top.end(), relevant.begin(), relevant.end(),
                        std::back_inserter(common));
  return common.size();
}

}  // namespace

double precision_at(const std::vector<TagId>& predicted, const std::set<TagId>& relevant,
                    std::size_t k) {
  return static_cast<double>(hits(predicted, relevant, k)) / static_cast<double>(k);
}

double recall_at(const std::vector<TagId>& predicted, const std::set<TagId>& relevant,
                 std::size_t k) {
  return static_cast<double>(hits(predicted, relevant, k)) /
         static_cast<double>(relevant.size());
}

double f1(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

double ndcg_at(const std::vector<TagId>& predicted, const std::set<TagId>& relevant,
               std::size_t k) {
  double dcg = 0.0;
  for (std::size_t i = 0; i < predicted.size() && i < k; ++i) {
    if (relevant.count(predicted[i]) != 0) dcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  }
  double idcg = 0.0;
  for (std::size_t i = 0; i < relevant.size() && i < k; ++i) {
    idcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  }
  return dcg / idcg;
}

Ols normal_equations(const std::vector<double>& x, const std::vector<double>& y,
                     const std::vector<double>& w) {
  // [S0 S1; S1 S2] [b; k] = [T0; T1]
  double s0 = 0, s1 = 0, s2 = 0, t0 = 0, t1 = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s0 += w[i];
    s1 += w[i] * x[i];
    s2 += w[i] * x[i] * x[i];
    t0 += w[i] * y[i];
    t1 += w[i] * x[i] * y[i];
  }
  const double det = s0 * s2 - s1 * s1;
  Ols fit;
  fit.intercept = (t0 * s2 - s1 * t1) / det;
  fit.slope = (s0 * t1 - s1 * t0) / det;
  const double y_mean = t0 / s0;
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - fit.intercept - fit.slope * x[i];
    ss_res += w[i] * e * e;
    ss_tot += w[i] * (y[i] - y_mean) * (y[i] - y_mean);
  }
  fit.r2 = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
  return fit;
}

std::vector<double> dense_pagerank(const std::vector<std::vector<double>>& adj,
                                   const std::vector<double>& preference, double damping) {
  const std::size_t n = adj.size();
  // Column-stochastic M.
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (std::size_t x = 0; x < n; ++x) {
    double deg = 0.0;
    for (std::size_t y = 0; y < n; ++y) deg += adj[x][y];
    for (std::size_t y = 0; y < n; ++y) {
      m[y][x] = deg > 0.0 ? adj[x][y] / deg : 1.0 / static_cast<double>(n);
    }
  }
  // (I - dM) w = (1 - d) p, augmented matrix, partial pivoting.
  std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = (i == j ? 1.0 : 0.0) - damping * m[i][j];
    a[i][n] = (1.0 - damping) * preference[i];
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[pivot][c])) pivot = r;
    }
    std::swap(a[c], a[pivot]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t j = c; j <= n; ++j) a[r][j] -= f * a[c][j];
    }
  }
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = a[i][n] / a[i][i];
  return w;
}

namespace {

std::vector<const Post*> train_posts_of(const tagreuse::ChronoSplit& split, tagreuse::UserId u) {
  std::vector<const Post*> out;
  for (const auto& p : split.train.posts()) {
    if (p.user == u) out.push_back(&p);
  }
  return out;
}

std::set<TagId> vocabulary(const std::vector<const Post*>& posts) {
  std::set<TagId> out;
  for (const auto* p : posts) out.insert(p->tags.begin(), p->tags.end());
  return out;
}

bool has(const Post& p, TagId t) {
  return std::find(p.tags.begin(), p.tags.end(), t) != p.tags.end();
}

void count(PoolCounts& pool, std::int64_t x, bool reused) {
  auto& c = pool[x];
  ++c.first;
  if (reused) ++c.second;
}

}  // namespace

PoolCounts pool_frequency(const tagreuse::ChronoSplit& split) {
  PoolCounts pool;
  for (const auto& test : split.test) {
    const auto posts = train_posts_of(split, test.user);
    for (TagId t : vocabulary(posts)) {
      std::int64_t n = 0;
      for (const auto* p : posts) n += has(*p, t) ? 1 : 0;
      count(pool, n, has(test, t));
    }
  }
  return pool;
}

PoolCounts pool_recency(const tagreuse::ChronoSplit& split) {
  PoolCounts pool;
  for (const auto& test : split.test) {
    const auto posts = train_posts_of(split, test.user);
    for (TagId t : vocabulary(posts)) {
      tagreuse::Timestamp last = std::numeric_limits<tagreuse::Timestamp>::min();
      for (const auto* p : posts) {
        if (has(*p, t)) last = std::max(last, p->timestamp);
      }
      const auto days = static_cast<std::int64_t>(
          std::floor(static_cast<double>(test.timestamp - last) / 86400.0));
      count(pool, std::max<std::int64_t>(1, days), has(test, t));
    }
  }
  return pool;
}

std::uint32_t cooc(const Folksonomy& f, TagId a, TagId b) {
  if (a == b) return 0;
  std::uint32_t n = 0;
  for (const auto& p : f.posts()) {
    if (has(p, a) && has(p, b)) ++n;
  }
  return n;
}

PoolCounts pool_context(const tagreuse::ChronoSplit& split) {
  PoolCounts pool;
  for (const auto& test : split.test) {
    std::vector<TagId> context;
    for (const auto& p : split.train.posts()) {
      if (p.resource == test.resource && p.user != test.user) {
        context.insert(context.end(), p.tags.begin(), p.tags.end());
      }
    }
    if (context.empty()) continue;
    for (TagId t : vocabulary(train_posts_of(split, test.user))) {
      std::int64_t v = 0;
      for (TagId c : context) v += cooc(split.train, c, t);
      if (v > 0) count(pool, v, has(test, t));
    }
  }
  return pool;
}

}  // namespace oracle
