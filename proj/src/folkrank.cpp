#include "tagreuse/folkrank.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace tagreuse {

FolkGraph::FolkGraph(std::size_t num_nodes, std::span<const WeightedEdge> edges) {
  std::map<std::pair<NodeId, NodeId>, double> merged;
  for (const auto& e : edges) {
    if (e.a >= num_nodes || e.b >= num_nodes) throw ParamError("edge endpoint out of range");
    if (e.a == e.b) throw ParamError("self loops are not supported");
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw ParamError("edge weights must be positive and finite");
    }
    merged[{std::min(e.a, e.b), std::max(e.a, e.b)}] += e.weight;
  }

  offsets_.assign(num_nodes + 1, 0);
  for (const auto& [key, w] : merged) {
    ++offsets_[key.first + 1];
    ++offsets_[key.second + 1];
  }
  for (std::size_t i = 0; i < num_nodes; ++i) offsets_[i + 1] += offsets_[i];
  adjacency_.resize(offsets_.back());
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  // std::map iterates in key order, so every adjacency row comes out sorted.
  for (const auto& [key, w] : merged) {
    adjacency_[cursor[key.first]++] = Neighbour{key.second, w};
  }
  for (const auto& [key, w] : merged) {
    adjacency_[cursor[key.second]++] = Neighbour{key.first, w};
  }
  for (std::size_t i = 0; i < num_nodes; ++i) {
    std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
              adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]),
              [](const Neighbour& x, const Neighbour& y) { return x.node < y.node; });
  }

  degree_.assign(num_nodes, 0.0);
  for (std::size_t i = 0; i < num_nodes; ++i) {
    for (std::size_t j = offsets_[i]; j < offsets_[i + 1]; ++j) degree_[i] += adjacency_[j].weight;
    if (offsets_[i] == offsets_[i + 1]) isolated_.push_back(static_cast<NodeId>(i));
  }
}

FolkGraph FolkGraph::from_folksonomy(const Folksonomy& train, EdgeWeighting weighting) {
  if (train.empty()) throw DataError("cannot build a FolkRank graph from an empty folksonomy");

  std::vector<std::int64_t> user_to_node(train.user_space(), -1);
  std::vector<std::int64_t> resource_to_node(train.resource_space(), -1);
  std::vector<std::int64_t> tag_to_node(train.tag_space(), -1);
  for (const auto& post : train.posts()) {
    user_to_node[index_of(post.user)] = 0;
    resource_to_node[index_of(post.resource)] = 0;
    for (TagId t : post.tags) tag_to_node[index_of(t)] = 0;
  }
  std::int64_t next = 0;
  std::size_t users = 0;
  std::size_t resources = 0;
  std::vector<TagId> node_tag;
  for (auto& n : user_to_node) {
    if (n == 0) {
      n = next++;
      ++users;
    } else {
      n = -1;
    }
  }
  for (auto& n : resource_to_node) {
    if (n == 0) {
      n = next++;
      ++resources;
    } else {
      n = -1;
    }
  }
  for (std::size_t t = 0; t < tag_to_node.size(); ++t) {
    if (tag_to_node[t] == 0) {
      tag_to_node[t] = next++;
      node_tag.push_back(id_at<TagId>(t));
    } else {
      tag_to_node[t] = -1;
    }
  }

  std::vector<WeightedEdge> edges;
  edges.reserve(train.num_posts() + 2 * train.num_tag_assignments());
  for (const auto& post : train.posts()) {
    const auto u = static_cast<NodeId>(user_to_node[index_of(post.user)]);
    const auto r = static_cast<NodeId>(resource_to_node[index_of(post.resource)]);
    edges.push_back({u, r, static_cast<double>(post.tags.size())});
    for (TagId t : post.tags) {
      const auto i = static_cast<NodeId>(tag_to_node[index_of(t)]);
      edges.push_back({u, i, 1.0});
      edges.push_back({r, i, 1.0});
    }
  }

  FolkGraph graph(static_cast<std::size_t>(next), edges);
  if (weighting == EdgeWeighting::kBinary) {
    for (auto& n : graph.adjacency_) n.weight = 1.0;
    for (std::size_t i = 0; i < graph.degree_.size(); ++i) {
      graph.degree_[i] = static_cast<double>(graph.offsets_[i + 1] - graph.offsets_[i]);
    }
  }
  graph.user_nodes_ = users;
  graph.resource_nodes_ = resources;
  graph.user_to_node_ = std::move(user_to_node);
  graph.resource_to_node_ = std::move(resource_to_node);
  graph.tag_to_node_ = std::move(tag_to_node);
  graph.node_tag_ = std::move(node_tag);
  return graph;
}

std::span<const FolkGraph::Neighbour> FolkGraph::neighbours(NodeId node) const {
  if (node >= num_nodes()) throw ParamError("node out of range");
  return std::span<const Neighbour>(adjacency_).subspan(offsets_[node],
                                                        offsets_[node + 1] - offsets_[node]);
}

double FolkGraph::weight(NodeId a, NodeId b) const {
  auto row = neighbours(a);
  auto it = std::lower_bound(row.begin(), row.end(), b,
                             [](const Neighbour& n, NodeId x) { return n.node < x; });
  return (it != row.end() && it->node == b) ? it->weight : 0.0;
}

void FolkGraph::apply_transition(std::span<const double> in, std::span<double> out) const {
  const std::size_t n = num_nodes();
  double dangling = 0.0;
  for (NodeId x : isolated_) dangling += in[x];
  const double spread = n > 0 ? dangling / static_cast<double>(n) : 0.0;
  // The adjacency is symmetric, so row y lists every x with an edge into y.
  for (std::size_t y = 0; y < n; ++y) {
    double acc = 0.0;
    for (std::size_t j = offsets_[y]; j < offsets_[y + 1]; ++j) {
      const auto& nb = adjacency_[j];
      acc += nb.weight / degree_[nb.node] * in[nb.node];
    }
    out[y] = acc + spread;
  }
}

namespace {

std::optional<NodeId> lookup(const std::vector<std::int64_t>& table, std::size_t index) {
  if (index >= table.size() || table[index] < 0) return std::nullopt;
  return static_cast<NodeId>(table[index]);
}

}  // namespace

std::optional<NodeId> FolkGraph::user_node(UserId user) const {
  return lookup(user_to_node_, index_of(user));
}

std::optional<NodeId> FolkGraph::resource_node(ResourceId resource) const {
  return lookup(resource_to_node_, index_of(resource));
}

std::optional<NodeId> FolkGraph::tag_node(TagId tag) const {
  return lookup(tag_to_node_, index_of(tag));
}

void PageRankOptions::validate() const {
  if (!(damping > 0.0 && damping < 1.0)) throw ParamError("damping must lie in (0, 1)");
  if (!(tol > 0.0)) throw ParamError("tolerance must be > 0");
  if (max_iter < 1) throw ParamError("max_iter must be >= 1");
}

PageRankResult pagerank(const FolkGraph& graph, std::span<const double> preference,
                        const PageRankOptions& options) {
  options.validate();
  const std::size_t n = graph.num_nodes();
  if (n == 0) throw ParamError("pagerank on an empty graph");
  if (preference.size() != n) throw ParamError("preference size does not match the graph");
  double total = 0.0;
  for (double p : preference) {
    if (!(p >= 0.0)) throw ParamError("preference entries must be non-negative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ParamError("preference must sum to 1");

  PageRankResult result;
  result.weights.assign(n, 1.0 / static_cast<double>(n));
  RankVector next(n);
  const double d = options.damping;
  for (int it = 0; it < options.max_iter; ++it) {
    graph.apply_transition(result.weights, next);
    double delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = d * next[i] + (1.0 - d) * preference[i];
      delta += std::abs(next[i] - result.weights[i]);
    }
    result.weights.swap(next);
    result.deltas.push_back(delta);
    result.iterations = it + 1;
    if (delta < options.tol) break;
  }
  return result;
}

RankVector uniform_preference(std::size_t num_nodes) {
  if (num_nodes == 0) throw ParamError("preference over zero nodes");
  return RankVector(num_nodes, 1.0 / static_cast<double>(num_nodes));
}

RankVector folkrank_preference(const FolkGraph& graph, std::optional<NodeId> user,
                               std::optional<NodeId> resource) {
  RankVector p(graph.num_nodes(), 1.0);
  if (user) p.at(*user) += static_cast<double>(graph.num_user_nodes());
  if (resource) p.at(*resource) += static_cast<double>(graph.num_resource_nodes());
  double total = 0.0;
  for (double v : p) total += v;
  for (double& v : p) v /= total;
  return p;
}

TagScores folkrank_scores(const FolkGraph& graph, std::span<const double> baseline,
                          UserId user, ResourceId resource, const PageRankOptions& options) {
  const auto u = graph.user_node(user);
  const auto r = graph.resource_node(resource);
  TagScores out;
  out.reserve(graph.num_tag_nodes());
  const NodeId first = graph.first_tag_node();
  const auto tags = graph.node_tags();
  if (!u && !r) {
    for (TagId t : tags) out.emplace(t, 0.0);
    return out;
  }
  const auto preferred = pagerank(graph, folkrank_preference(graph, u, r), options);
  for (std::size_t i = 0; i < tags.size(); ++i) {
    out.emplace(tags[i], preferred.weights[first + i] - baseline[first + i]);
  }
  return out;
}

FolkRankPredictor::FolkRankPredictor(PageRankOptions options, EdgeWeighting weighting)
    : options_(options), weighting_(weighting) {
  options_.validate();
}

void FolkRankPredictor::fit(const Folksonomy& train) {
  graph_ = FolkGraph::from_folksonomy(train, weighting_);
  baseline_ = pagerank(graph_, uniform_preference(graph_.num_nodes()), options_).weights;
}

TagScores FolkRankPredictor::score(UserId user, ResourceId resource, Timestamp) const {
  return folkrank_scores(graph_, baseline_, user, resource, options_);
}

}  // namespace tagreuse
