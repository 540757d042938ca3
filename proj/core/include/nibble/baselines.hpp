#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nibble/first_fit.hpp"
#include "nibble/replay.hpp"
#include "nibble/types.hpp"

namespace nibble {

/// Online first-fit: each arrival takes the smallest color free at both ends.
class GreedyOnline {
 public:
  explicit GreedyOnline(std::size_t node_count) : band_(node_count, 0), degree_(node_count, 0) {}

  Color push(NodeId u, NodeId v);
  std::size_t arrivals() const { return arrivals_; }
  Color max_color() const { return max_color_; }
  /// Largest number of already-colored edges seen at the two ends of an
  /// arrival, i.e. the number of colors the arrival had to avoid at most.
  std::size_t max_blocking() const { return max_blocking_; }
  void set_log(DecisionLog* log) { log_ = log; }

 private:
  FirstFitBand band_;
  std::vector<std::uint32_t> degree_;
  std::size_t arrivals_ = 0;
  std::size_t max_blocking_ = 0;
  Color max_color_ = kNoColor;
  DecisionLog* log_ = nullptr;
};

/// Colors per arrival. node_count = 0 sizes the node set from the stream.
std::vector<Color> greedy_online(std::span<const Endpoints> stream, std::size_t node_count = 0,
                                 DecisionLog* log = nullptr);

}  // namespace nibble
