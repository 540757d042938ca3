#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "nibble/types.hpp"

namespace nibble {

struct Incidence {
  NodeId neighbor;
  EdgeId edge;
};

/// Simple undirected graph with O(1) insertion and O(deg) deletion/lookup.
///
/// Edge ids are dense; an id freed by a deletion may be handed out again by a
/// later insertion, but never while the edge that owns it is still present.
/// The degree bound is declared up front and, when enforced, checked on every
/// insertion.
class Graph {
 public:
  enum class DegreeBound { kEnforced, kUnchecked };

  Graph() = default;
  Graph(std::size_t node_count, std::size_t max_degree_bound,
        DegreeBound bound = DegreeBound::kEnforced);

  /// Throws Error{kSelfLoop, kDuplicateEdge, kDegreeBoundExceeded, kNodeOutOfRange}.
  EdgeId insert_edge(NodeId u, NodeId v);
  /// Throws Error{kMissingEdge}.
  void delete_edge(NodeId u, NodeId v);

  std::optional<EdgeId> find_edge(NodeId u, NodeId v) const;
  bool has_edge(NodeId u, NodeId v) const { return find_edge(u, v).has_value(); }

  std::size_t node_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  std::size_t max_degree_bound() const { return max_degree_bound_; }
  bool enforces_degree_bound() const { return bound_ == DegreeBound::kEnforced; }
  std::size_t degree(NodeId v) const { return adjacency_[v].size(); }

  std::span<const Incidence> incident(NodeId v) const { return adjacency_[v]; }

  /// One past the largest edge id ever handed out; per-edge arrays are sized by this.
  std::size_t edge_id_bound() const { return endpoints_.size(); }
  bool is_live(EdgeId e) const { return e < live_.size() && live_[e] != 0; }
  Endpoints endpoints(EdgeId e) const { return endpoints_[e]; }

  /// Live edge ids in ascending order.
  std::vector<EdgeId> edge_ids() const;

 private:
  void check_node(NodeId v) const;

  std::vector<std::vector<Incidence>> adjacency_;
  std::vector<Endpoints> endpoints_;
  std::vector<std::uint8_t> live_;
  std::vector<EdgeId> free_ids_;
  std::size_t edge_count_ = 0;
  std::size_t max_degree_bound_ = 0;
  DegreeBound bound_ = DegreeBound::kEnforced;
};

std::size_t max_degree(const Graph& g);

/// Builds a graph from an edge list; the degree bound is enforced.
Graph graph_from_edges(std::size_t node_count, std::size_t max_degree_bound,
                       std::span<const Endpoints> edges);

/// Partial map edge id -> color, kNoColor for uncolored.
struct EdgeColoring {
  std::vector<Color> color_of;

  EdgeColoring() = default;
  explicit EdgeColoring(std::size_t edge_id_bound) : color_of(edge_id_bound, kNoColor) {}

  Color at(EdgeId e) const { return e < color_of.size() ? color_of[e] : kNoColor; }
  void set(EdgeId e, Color c) {
    if (e >= color_of.size()) color_of.resize(e + 1, kNoColor);
    color_of[e] = c;
  }
};

struct ColoringReport {
  bool valid = true;
  std::optional<std::pair<EdgeId, EdgeId>> first_conflict;
  std::size_t uncolored_count = 0;
};

ColoringReport verify_proper_coloring(const Graph& g, const EdgeColoring& coloring,
                                      bool require_complete);

/// Number of distinct non-null colors on live edges, and the largest one.
struct ColorUsage {
  std::size_t distinct = 0;
  Color max_color = kNoColor;
};

ColorUsage color_usage(const Graph& g, const EdgeColoring& coloring);

/// Maps per-arrival colors of a stream onto the graph built from that stream.
EdgeColoring coloring_from_stream(const Graph& g, std::span<const Endpoints> stream,
                                  std::span<const Color> colors);

}  // namespace nibble
