#include "nibble/baselines.hpp"

#include <algorithm>
#include <string>

namespace nibble {

Color GreedyOnline::push(NodeId u, NodeId v) {
  if (u == v) throw Error(ErrorCode::kSelfLoop, "arrival (" + std::to_string(u) + "," + std::to_string(v) + ")");
  if (u >= degree_.size() || v >= degree_.size()) {
    throw Error(ErrorCode::kNodeOutOfRange, "arrival (" + std::to_string(u) + "," + std::to_string(v) + ")");
  }
  max_blocking_ = std::max<std::size_t>(max_blocking_, degree_[u] + degree_[v]);
  const Color c = band_.assign(u, v);
  ++degree_[u];
  ++degree_[v];
  max_color_ = std::max(max_color_, c);
  if (log_ != nullptr) log_->push_back({arrivals_, Endpoints::normalized(u, v), c});
  ++arrivals_;
  return c;
}

std::vector<Color> greedy_online(std::span<const Endpoints> stream, std::size_t node_count, DecisionLog* log) {
  if (node_count == 0) {
    for (const Endpoints& e : stream) node_count = std::max<std::size_t>(node_count, std::max(e.u, e.v) + 1);
  }
  GreedyOnline greedy(node_count);
  greedy.set_log(log);
  std::vector<Color> colors;
  colors.reserve(stream.size());
  for (const Endpoints& e : stream) colors.push_back(greedy.push(e.u, e.v));
  return colors;
}

}  // namespace nibble
