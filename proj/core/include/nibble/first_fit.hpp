#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "nibble/types.hpp"

namespace nibble {

/// First-fit edge coloring restricted to colors strictly above a floor.
///
/// Tracks, per node, which band colors are held by incident edges. Used by
/// every greedy stage: the greedy baseline (floor 0), phase two of the basic
/// algorithm and the warm-up overflow (floor C), the general algorithm's
/// Step I/III, and SimpleColor.
class FirstFitBand {
 public:
  FirstFitBand() = default;
  FirstFitBand(std::size_t node_count, Color floor) : floor_(floor), used_(node_count) {}

  Color floor() const { return floor_; }
  std::size_t node_count() const { return used_.size(); }
  void resize_nodes(std::size_t node_count) { used_.resize(node_count); }

  /// Smallest color > floor held by no edge at u or v.
  Color first_free(NodeId u, NodeId v) const;
  void occupy(NodeId u, NodeId v, Color c);
  void release(NodeId u, NodeId v, Color c);
  bool held(NodeId x, Color c) const;

  Color assign(NodeId u, NodeId v) {
    const Color c = first_free(u, v);
    occupy(u, v, c);
    return c;
  }

 private:
  void set_bit(NodeId x, std::size_t bit);
  void clear_bit(NodeId x, std::size_t bit);

  Color floor_ = 0;
  std::vector<std::vector<std::uint64_t>> used_;
};

}  // namespace nibble
