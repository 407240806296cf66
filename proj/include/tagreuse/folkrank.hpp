#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tagreuse/predictor.hpp"

namespace tagreuse {

using NodeId = std::uint32_t;
using RankVector = std::vector<double>;

struct WeightedEdge {
  NodeId a = 0;
  NodeId b = 0;
  double weight = 0.0;
};

enum class EdgeWeighting { kCounts, kBinary };

// Undirected weighted graph with a column-stochastic random-walk operator.
// Nodes without edges spread their mass uniformly over all nodes.
class FolkGraph {
 public:
  struct Neighbour {
    NodeId node = 0;
    double weight = 0.0;
  };

  FolkGraph() = default;
  // Parallel edges accumulate; self loops are rejected.
  FolkGraph(std::size_t num_nodes, std::span<const WeightedEdge> edges);

  // Tripartite graph over the users, resources and tags that occur in train.
  // Per post (u, r, S): w(u,r) += |S| and, for each tag i in S, w(u,i) += 1,
  // w(r,i) += 1. With kBinary every non-zero weight becomes 1.
  static FolkGraph from_folksonomy(const Folksonomy& train,
                                   EdgeWeighting weighting = EdgeWeighting::kCounts);

  std::size_t num_nodes() const noexcept { return degree_.size(); }
  std::span<const Neighbour> neighbours(NodeId node) const;
  double weight(NodeId a, NodeId b) const;
  double degree(NodeId node) const { return degree_.at(node); }

  // out = M * in, where M[y][x] = w(x, y) / deg(x).
  void apply_transition(std::span<const double> in, std::span<double> out) const;

  std::size_t num_user_nodes() const noexcept { return user_nodes_; }
  std::size_t num_resource_nodes() const noexcept { return resource_nodes_; }
  std::size_t num_tag_nodes() const noexcept { return node_tag_.size(); }

  std::optional<NodeId> user_node(UserId user) const;
  std::optional<NodeId> resource_node(ResourceId resource) const;
  std::optional<NodeId> tag_node(TagId tag) const;
  // Tag nodes occupy the last num_tag_nodes() ids, in this order.
  std::span<const TagId> node_tags() const noexcept { return node_tag_; }
  NodeId first_tag_node() const noexcept {
    return static_cast<NodeId>(num_nodes() - node_tag_.size());
  }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Neighbour> adjacency_;
  std::vector<double> degree_;
  std::vector<NodeId> isolated_;

  std::size_t user_nodes_ = 0;
  std::size_t resource_nodes_ = 0;
  std::vector<std::int64_t> user_to_node_;
  std::vector<std::int64_t> resource_to_node_;
  std::vector<std::int64_t> tag_to_node_;
  std::vector<TagId> node_tag_;
};

inline FolkGraph build_graph(const Folksonomy& train,
                             EdgeWeighting weighting = EdgeWeighting::kCounts) {
  return FolkGraph::from_folksonomy(train, weighting);
}

struct PageRankOptions {
  double damping = 0.7;
  double tol = 1e-8;
  int max_iter = 200;

  void validate() const;
};

struct PageRankResult {
  RankVector weights;
  int iterations = 0;
  // L1 distance between successive iterates, one entry per iteration.
  std::vector<double> deltas;
};

// Iterates w <- d*M*w + (1-d)*p from the uniform vector until the L1 change
// drops below tol or max_iter iterations have run.
PageRankResult pagerank(const FolkGraph& graph, std::span<const double> preference,
                        const PageRankOptions& options = {});

RankVector uniform_preference(std::size_t num_nodes);

// Uniform weight 1 on every node plus |U| on the user node and |R| on the
// resource node, normalized. Missing nodes receive no extra mass.
RankVector folkrank_preference(const FolkGraph& graph, std::optional<NodeId> user,
                               std::optional<NodeId> resource);

// Preferential minus baseline weights, for tag nodes only.
TagScores folkrank_scores(const FolkGraph& graph, std::span<const double> baseline,
                          UserId user, ResourceId resource, const PageRankOptions& options);

class FolkRankPredictor final : public TagPredictor {
 public:
  explicit FolkRankPredictor(PageRankOptions options = {},
                             EdgeWeighting weighting = EdgeWeighting::kCounts);

  std::string name() const override { return "folkrank"; }
  void fit(const Folksonomy& train) override;
  TagScores score(UserId user, ResourceId resource, Timestamp reference_time) const override;

 private:
  PageRankOptions options_;
  EdgeWeighting weighting_;
  FolkGraph graph_;
  RankVector baseline_;
};

}  // namespace tagreuse
