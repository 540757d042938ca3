#pragma once

// Offline two-phase nibble coloring.
//
// Phase one runs t_eps - 1 rounds. In round i every still-unsampled edge joins
// S_i with probability eps; each sampled edge draws a tentative color uniformly
// from its palette P_i(u) ∩ P_i(v), where P_i(v) is [C] minus every tentative
// color drawn at v in rounds < i (failed edges included). A sampled edge keeps
// its color unless the palette was empty or a same-round neighbor drew the same
// color; such edges fail and are never retried. Phase two colors the failed and
// never-sampled edges first-fit with colors above C.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nibble/graph.hpp"
#include "nibble/params.hpp"
#include "nibble/random.hpp"

namespace nibble {

/// Per-node sets of colors in [C] already claimed by a tentative pick.
/// The complement of row v is the node palette P_i(v).
class BlockedColors {
 public:
  BlockedColors() = default;
  BlockedColors(std::size_t node_count, Color colors);

  Color colors() const { return colors_; }
  bool blocked(NodeId v, Color c) const {
    const std::size_t bit = c - 1;
    return (bits_[v * words_ + bit / 64] >> (bit % 64)) & 1U;
  }
  void block(NodeId v, Color c) {
    const std::size_t bit = c - 1;
    bits_[v * words_ + bit / 64] |= std::uint64_t{1} << (bit % 64);
  }
  void unblock(NodeId v, Color c) {
    const std::size_t bit = c - 1;
    bits_[v * words_ + bit / 64] &= ~(std::uint64_t{1} << (bit % 64));
  }

  std::size_t node_palette_size(NodeId v) const;
  std::size_t palette_size(NodeId u, NodeId v) const;
  /// P(u) ∩ P(v) in ascending order.
  void palette(NodeId u, NodeId v, std::vector<Color>& out) const;
  /// The k-th (0-based) color of P(u) ∩ P(v) in ascending order.
  Color palette_element(NodeId u, NodeId v, std::size_t k) const;

 private:
  std::uint64_t free_word(NodeId u, NodeId v, std::size_t w) const;

  Color colors_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

struct SummaryStats {
  std::size_t count = 0;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;

  void add(double x);
};

/// Controls the optional per-round measurements consumed by the event checker.
struct EventSampling {
  bool enabled = false;
  /// Cap on measured edges / (node, color) pairs / nodes per round.
  std::size_t budget = 10'000;
  /// Measure everything instead of a sample.
  bool full_sweep = false;
  /// Seeds the measurement sampler; independent of the algorithm's generator.
  std::uint64_t seed = 0;
};

struct RoundTrace {
  unsigned round = 0;
  std::size_t live = 0;     // |E_i|
  std::size_t sampled = 0;  // |S_i|
  std::size_t failed = 0;   // |F_i|
  std::size_t failed_max_degree = 0;  // Δ(G_{F_i})
  SummaryStats palette_size;
  SummaryStats c_degree;

  // Raw samples, filled only when EventSampling::enabled.
  std::vector<double> palette_sizes;           // |P_i(e)|, e ∈ E_i
  std::vector<double> c_degrees;               // |N_{i,c}(v)|
  std::vector<double> node_sample_fractions;   // |S_i ∩ N_i(v)| / |N_i(v)|
  std::vector<double> color_sample_fractions;  // |S_i ∩ N_{i,c}(v)| / |N_{i,c}(v)|
  std::vector<double> node_failed_fractions;   // |F_i ∩ N(v)| / |S_i ∩ N(v)|
};

/// Mutable state of phase one.
struct RoundState {
  RoundState(const Graph& g, const Params& p);

  const Graph* graph;
  Color colors;
  unsigned round = 1;
  std::vector<EdgeId> live;     // E_i, ascending ids
  std::vector<EdgeId> sampled;  // S_i of the current round
  std::vector<unsigned> round_of;  // round in which the edge was sampled; 0 = never
  std::vector<Color> tentative;    // c(e); kNoColor is null
  std::vector<std::uint8_t> failed;
  BlockedColors blocked;
  EdgeColoring partial;
  std::vector<EdgeId> failed_edges;  // ⋃ F_i
};

/// Draws S_i (one uniform draw per live edge, ascending id) and sets live = E_{i+1}.
const std::vector<EdgeId>& sample_round(RoundState& state, double epsilon, Rng& rng);

/// P_i(e) for the state's current round, ascending.
std::vector<Color> compute_palette(const RoundState& state, EdgeId e);

/// Uniform over the palette; kNoColor for an empty palette.
Color tentative_color(std::span<const Color> palette, Rng& rng);

/// Draws c(e) for every e ∈ S_i (ascending id).
void draw_tentative_colors(RoundState& state, Rng& rng);

/// Computes F_i, finalizes the successful edges, blocks every drawn color at
/// both endpoints and advances to the next round. Returns F_i.
std::vector<EdgeId> resolve_failures(RoundState& state);

struct PhaseOneOptions {
  /// Reject inputs whose degrees leave [(1-eps^2)Δ, (1+eps^2)Δ].
  bool strict_regularity = false;
  EventSampling events;
};

struct PhaseOneResult {
  EdgeColoring partial;
  std::vector<EdgeId> failed;  // edges of G_F
  std::vector<EdgeId> tail;    // edges of G_{t_eps}
  std::vector<unsigned> round_of;
  std::vector<Color> tentative;
  std::vector<RoundTrace> trace;
};

/// Throws Error{kDegreeOutOfRange} in strict mode.
PhaseOneResult run_phase_one(const Graph& g, const Params& params, Rng& rng,
                             const PhaseOneOptions& options = {});

/// First-fit over `uncolored` (in the given order) with colors above `floor`.
EdgeColoring run_phase_two(const Graph& g, EdgeColoring partial, std::span<const EdgeId> uncolored,
                           Color floor);

struct BasicMetrics {
  Color phase1_colors = 0;
  std::size_t colors_used = 0;
  Color max_color = kNoColor;
  std::size_t phase_one_colored = 0;
  std::size_t uncolored_max_degree = 0;  // Δ(G_{t_eps} ∪ G_F)
  std::vector<double> failure_fraction;  // |F_i| / |S_i| per round
};

struct BasicResult {
  EdgeColoring coloring;
  BasicMetrics metrics;
  PhaseOneResult phase_one;
};

BasicResult run_basic(const Graph& g, const Params& params, Rng& rng, const PhaseOneOptions& options = {});

}  // namespace nibble
