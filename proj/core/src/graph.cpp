#include "nibble/graph.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

namespace nibble {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDuplicateEdge: return "DuplicateEdge";
    case ErrorCode::kSelfLoop: return "SelfLoop";
    case ErrorCode::kDegreeBoundExceeded: return "DegreeBoundExceeded";
    case ErrorCode::kMissingEdge: return "MissingEdge";
    case ErrorCode::kNodeOutOfRange: return "NodeOutOfRange";
    case ErrorCode::kInvalidEpsilon: return "InvalidEpsilon";
    case ErrorCode::kDegreeOutOfRange: return "DegreeOutOfRange";
    case ErrorCode::kStreamLengthMismatch: return "StreamLengthMismatch";
    case ErrorCode::kInfeasibleParams: return "InfeasibleParams";
    case ErrorCode::kResourceLimit: return "ResourceLimit";
    case ErrorCode::kGadgetExhausted: return "GadgetExhausted";
    case ErrorCode::kEmptySamples: return "EmptySamples";
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kIo: return "IoError";
  }
  return "Unknown";
}

Graph::Graph(std::size_t node_count, std::size_t max_degree_bound, DegreeBound bound)
    : adjacency_(node_count), max_degree_bound_(max_degree_bound), bound_(bound) {}

void Graph::check_node(NodeId v) const {
  if (v >= adjacency_.size()) {
    throw Error(ErrorCode::kNodeOutOfRange,
                "node " + std::to_string(v) + " >= n=" + std::to_string(adjacency_.size()));
  }
}

EdgeId Graph::insert_edge(NodeId u, NodeId v) {
  check_node(u);
  check_node(v);
  if (u == v) throw Error(ErrorCode::kSelfLoop, "(" + std::to_string(u) + "," + std::to_string(v) + ")");
  if (has_edge(u, v)) {
    throw Error(ErrorCode::kDuplicateEdge, "(" + std::to_string(u) + "," + std::to_string(v) + ")");
  }
  if (bound_ == DegreeBound::kEnforced &&
      (degree(u) >= max_degree_bound_ || degree(v) >= max_degree_bound_)) {
    throw Error(ErrorCode::kDegreeBoundExceeded,
                "(" + std::to_string(u) + "," + std::to_string(v) + ") with bound " +
                    std::to_string(max_degree_bound_));
  }
  EdgeId id;
  if (!free_ids_.empty()) {
    id = free_ids_.back();
    free_ids_.pop_back();
    endpoints_[id] = Endpoints::normalized(u, v);
    live_[id] = 1;
  } else {
    id = static_cast<EdgeId>(endpoints_.size());
    endpoints_.push_back(Endpoints::normalized(u, v));
    live_.push_back(1);
  }
  adjacency_[u].push_back({v, id});
  adjacency_[v].push_back({u, id});
  ++edge_count_;
  return id;
}

namespace {

void erase_incidence(std::vector<Incidence>& list, EdgeId e) {
  auto it = std::find_if(list.begin(), list.end(), [e](const Incidence& inc) { return inc.edge == e; });
  *it = list.back();
  list.pop_back();
}

}  // namespace

void Graph::delete_edge(NodeId u, NodeId v) {
  check_node(u);
  check_node(v);
  auto id = find_edge(u, v);
  if (!id) {
    throw Error(ErrorCode::kMissingEdge, "(" + std::to_string(u) + "," + std::to_string(v) + ")");
  }
  erase_incidence(adjacency_[u], *id);
  erase_incidence(adjacency_[v], *id);
  live_[*id] = 0;
  free_ids_.push_back(*id);
  --edge_count_;
}

std::optional<EdgeId> Graph::find_edge(NodeId u, NodeId v) const {
  if (u >= adjacency_.size() || v >= adjacency_.size() || u == v) return std::nullopt;
  const NodeId scan = degree(u) <= degree(v) ? u : v;
  const NodeId target = scan == u ? v : u;
  for (const Incidence& inc : adjacency_[scan]) {
    if (inc.neighbor == target) return inc.edge;
  }
  return std::nullopt;
}

std::vector<EdgeId> Graph::edge_ids() const {
  std::vector<EdgeId> ids;
  ids.reserve(edge_count_);
  for (EdgeId e = 0; e < live_.size(); ++e) {
    if (live_[e]) ids.push_back(e);
  }
  return ids;
}

std::size_t max_degree(const Graph& g) {
  std::size_t best = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) best = std::max(best, g.degree(v));
  return best;
}

Graph graph_from_edges(std::size_t node_count, std::size_t max_degree_bound,
                       std::span<const Endpoints> edges) {
  Graph g(node_count, max_degree_bound);
  for (const Endpoints& e : edges) g.insert_edge(e.u, e.v);
  return g;
}

ColoringReport verify_proper_coloring(const Graph& g, const EdgeColoring& coloring,
                                      bool require_complete) {
  ColoringReport report;
  for (EdgeId e = 0; e < g.edge_id_bound(); ++e) {
    if (g.is_live(e) && coloring.at(e) == kNoColor) ++report.uncolored_count;
  }
  std::vector<std::pair<Color, EdgeId>> seen;
  for (NodeId v = 0; v < g.node_count() && !report.first_conflict; ++v) {
    seen.clear();
    for (const Incidence& inc : g.incident(v)) {
      const Color c = coloring.at(inc.edge);
      if (c != kNoColor) seen.emplace_back(c, inc.edge);
    }
    std::sort(seen.begin(), seen.end());
    for (std::size_t k = 1; k < seen.size(); ++k) {
      if (seen[k].first == seen[k - 1].first) {
        report.first_conflict = std::make_pair(seen[k - 1].second, seen[k].second);
        break;
      }
    }
  }
  report.valid = !report.first_conflict && (!require_complete || report.uncolored_count == 0);
  return report;
}

ColorUsage color_usage(const Graph& g, const EdgeColoring& coloring) {
  std::unordered_set<Color> distinct;
  ColorUsage usage;
  for (EdgeId e = 0; e < g.edge_id_bound(); ++e) {
    if (!g.is_live(e)) continue;
    const Color c = coloring.at(e);
    if (c == kNoColor) continue;
    distinct.insert(c);
    usage.max_color = std::max(usage.max_color, c);
  }
  usage.distinct = distinct.size();
  return usage;
}

EdgeColoring coloring_from_stream(const Graph& g, std::span<const Endpoints> stream,
                                  std::span<const Color> colors) {
  EdgeColoring coloring(g.edge_id_bound());
  for (std::size_t k = 0; k < stream.size() && k < colors.size(); ++k) {
    if (auto id = g.find_edge(stream[k].u, stream[k].v)) coloring.set(*id, colors[k]);
  }
  return coloring;
}

}  // namespace nibble
