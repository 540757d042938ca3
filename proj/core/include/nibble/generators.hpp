#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "nibble/graph.hpp"
#include "nibble/types.hpp"

namespace nibble {

/// Random simple graph with every degree in [ceil(Δ(1 - slack)), Δ].
///
/// Target degrees are drawn per node, then realized by random stub pairing.
/// A pairing with a loop or a repeated pair is thrown away and redrawn up to
/// 100 times; after that the last pairing is repaired by degree-preserving
/// swaps. Throws Error{kInfeasibleParams} when n <= Δ (for Δ >= 1) or when the
/// degree window admits no even degree sum.
Graph gen_near_regular(std::size_t n, std::size_t delta, double slack, std::uint64_t seed);

/// Uniformly shuffled copy of g's edges.
EdgeStream gen_random_order_stream(const Graph& g, std::uint64_t seed);

/// Oblivious update sequence on n nodes keeping every degree <= Δ.
///
/// The first floor(length/2) updates are insertions. Afterwards each update is
/// a uniformly chosen deletion with probability `churn`, an insertion of a
/// uniformly chosen addable pair otherwise. With churn = 0 the sequence stops
/// early once no pair can be added.
UpdateStream gen_update_sequence(std::size_t n, std::size_t delta, std::size_t length, double churn,
                                 std::uint64_t seed);

struct LowerBoundParams {
  std::size_t delta = 2;
  /// 0 picks the largest count that fits the node budget.
  std::size_t copies = 0;
  std::size_t node_budget = 10'000;
  std::uint64_t seed = 0;
};

/// 2Δ · binom(2Δ-2, Δ-1) · binom(2Δ-1, Δ); Error{kResourceLimit} on 64-bit overflow.
std::uint64_t lower_bound_beta(std::size_t delta);

struct LowerBoundInstance {
  Graph graph;
  EdgeStream stream;  // one uniform shuffle over all copies
  std::uint64_t beta = 0;
  std::size_t copies = 0;
  std::vector<NodeId> hubs;
};

/// Per copy: β stars with Δ-1 leaves each and a hub joined to Δ distinct
/// random star centers. Throws Error{kInfeasibleParams} for Δ < 2 and
/// Error{kResourceLimit} when the copies do not fit the node budget.
LowerBoundInstance gen_lower_bound_instance(const LowerBoundParams& params);

}  // namespace nibble
