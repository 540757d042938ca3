#pragma once

// Random-order online coloring.
//
// The warm-up colorer needs m up front: it cuts the stream into prefixes whose
// lengths follow the binomial-prefix law, so the k-th prefix plays the role of
// the k-th nibble round. The general colorer drops the need for m and for
// near-regularity by estimating m from a greedy prefix and padding the graph
// with dummy cliques before handing it to the warm-up colorer.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nibble/basic.hpp"
#include "nibble/first_fit.hpp"
#include "nibble/params.hpp"
#include "nibble/random.hpp"
#include "nibble/replay.hpp"

namespace nibble {

/// Cumulative cut points b_1 <= ... <= b_rounds with
/// b_i - b_{i-1} ~ Bin(total - b_{i-1}, eps) and b_0 = 0.
std::vector<std::size_t> binomial_prefix_partition(std::size_t total, double epsilon, unsigned rounds, Rng& rng);

struct WarmupMetrics {
  Color phase1_colors = 0;
  std::size_t tentative_band_edges = 0;
  std::size_t greedy_band_edges = 0;
  std::size_t colors_used = 0;
  Color max_color = kNoColor;
  Color max_tentative_color = kNoColor;
  Color min_greedy_color = kNoColor;
  std::vector<std::size_t> boundaries;
  /// Set by run_warmup when the stream's degrees leave [(1-eps^2)Δ, (1+eps^2)Δ].
  bool regularity_warning = false;
};

/// Online warm-up colorer. Every push() returns the edge's final color.
class WarmupColorer {
 public:
  /// Draws the prefix boundaries for m arrivals over params.phase_one_rounds() rounds.
  WarmupColorer(const Params& params, std::size_t node_count, std::size_t m, Rng& rng);

  Color push(NodeId u, NodeId v);

  std::size_t arrivals() const { return arrivals_; }
  std::size_t expected_arrivals() const { return m_; }
  /// Round of the next arrival; phase_one_rounds() + 1 once past the last cut.
  unsigned current_round() const { return round_; }
  const WarmupMetrics& metrics() const { return metrics_; }
  void set_log(DecisionLog* log) { log_ = log; }

 private:
  void advance_round();

  Params params_;
  std::size_t m_;
  Rng* rng_;
  unsigned round_ = 1;
  std::size_t arrivals_ = 0;
  BlockedColors blocked_;  // tentative colors of earlier rounds
  BlockedColors pending_;  // tentative colors of the current round
  std::vector<std::pair<NodeId, Color>> pending_list_;
  FirstFitBand greedy_;
  std::vector<std::uint32_t> color_count_;
  WarmupMetrics metrics_;
  DecisionLog* log_ = nullptr;
};

struct WarmupResult {
  std::vector<Color> colors;  // per arrival
  WarmupMetrics metrics;
};

/// Throws Error{kStreamLengthMismatch} when stream.size() != m.
WarmupResult run_warmup(std::span<const Endpoints> stream, const Params& params, std::size_t m, Rng& rng,
                        DecisionLog* log = nullptr);

/// Derives Params from (n, Δ, ε, K) and runs the warm-up.
WarmupResult run_warmup(std::span<const Endpoints> stream, std::size_t n, std::size_t delta, std::size_t m,
                        double epsilon, unsigned K, Rng& rng, DecisionLog* log = nullptr);

// ---------------------------------------------------------------------------
// General graphs, unknown m

/// ceil(eps * Δ), at least 1.
std::size_t degree_trigger(double epsilon, std::size_t delta);

/// floor(T / (eps (1 + eps^2))).
std::size_t estimate_length(std::size_t T, double epsilon);

/// Step I: greedy prefix until some node reaches degree ceil(eps Δ).
class EstimateStage {
 public:
  EstimateStage(std::size_t node_count, std::size_t delta, double epsilon);

  /// Colors the edge first-fit from color 1. Returns the color.
  Color push(NodeId u, NodeId v);
  bool triggered() const { return triggered_; }

  std::size_t T() const { return T_; }
  const std::vector<std::uint32_t>& degrees() const { return degree_; }
  Color max_color() const { return max_color_; }
  std::size_t m_prime() const { return estimate_length(T_, epsilon_); }

 private:
  double epsilon_;
  std::size_t trigger_;
  std::size_t T_ = 0;
  bool triggered_ = false;
  Color max_color_ = kNoColor;
  std::vector<std::uint32_t> degree_;
  FirstFitBand band_;
};

struct EstimateResult {
  std::size_t T = 0;
  bool triggered = false;
  std::vector<std::uint32_t> dT;
  std::size_t m_prime = 0;
  Color delta1 = kNoColor;
  std::vector<Color> colors;  // first T arrivals
};

/// Runs Step I over a stream prefix (stops at the trigger or the stream end).
EstimateResult estimate_stage(std::span<const Endpoints> stream, std::size_t node_count, double epsilon,
                              std::size_t delta);

/// The dummy part of H: per real node v, Δ dummy nodes n + vΔ + j (j < Δ)
/// forming a clique, plus spokes from v to the first s(v) of them.
///
/// Dummy edges are addressed by a dense index: clique edges first (node by
/// node), then spokes.
class DummyGadget {
 public:
  DummyGadget() = default;
  DummyGadget(std::size_t node_count, std::size_t delta, std::vector<std::uint32_t> spokes);

  std::size_t real_nodes() const { return n_; }
  std::size_t delta() const { return delta_; }
  std::size_t total_nodes() const { return n_ + n_ * delta_; }
  std::uint64_t clique_edges() const { return static_cast<std::uint64_t>(n_) * per_clique_; }
  std::uint64_t size() const { return clique_edges() + spoke_prefix_.back(); }
  std::uint32_t spokes(NodeId v) const { return spokes_[v]; }
  NodeId dummy_node(NodeId v, std::size_t j) const { return static_cast<NodeId>(n_ + v * delta_ + j); }

  Endpoints edge(std::uint64_t index) const;
  /// Degree of a node of H counting dummy edges only.
  std::size_t dummy_degree(NodeId x) const;

 private:
  std::size_t n_ = 0;
  std::size_t delta_ = 0;
  std::uint64_t per_clique_ = 0;
  std::vector<std::uint32_t> spokes_;
  std::vector<std::uint64_t> spoke_prefix_{0};
};

/// Spoke count for a real node: max{0, Δ - (1/eps - 1) d}, rounded to nearest and clamped to [0, Δ].
std::uint32_t spoke_count(std::uint32_t dT, double epsilon, std::size_t delta);

DummyGadget build_dummy_gadget(std::span<const std::uint32_t> dT, double epsilon, std::size_t delta);

/// Uniform sampling without replacement from {0, ..., size-1}; O(size) bits.
class IndexSampler {
 public:
  explicit IndexSampler(std::uint64_t size);

  std::uint64_t remaining() const { return remaining_; }
  std::uint64_t take(Rng& rng);

 private:
  std::uint64_t select(std::uint64_t k) const;  // k-th remaining, 0-based
  void fenwick_add(std::size_t word, std::int64_t delta);

  std::uint64_t size_;
  std::uint64_t remaining_;
  std::vector<std::uint64_t> free_;      // bit set = still available
  std::vector<std::uint32_t> fenwick_;   // per-word available counts
  std::size_t top_bit_ = 1;
};

/// Decides, arrival by arrival, whether the next item of a uniformly random
/// merge of `real` ordered items and `dummy` unordered items is a dummy.
class Interleaver {
 public:
  Interleaver(std::uint64_t real, std::uint64_t dummy) : real_(real), dummy_(dummy) {}

  std::uint64_t real_left() const { return real_; }
  std::uint64_t dummy_left() const { return dummy_; }
  /// Draws "dummy" with probability D'/(R'+D') and consumes one item.
  bool next_is_dummy(Rng& rng);

 private:
  std::uint64_t real_;
  std::uint64_t dummy_;
};

struct GeneralMetrics {
  std::size_t T = 0;
  bool triggered = false;
  std::size_t m_prime = 0;
  std::size_t arrivals = 0;
  /// Stream ended inside Step II: m' > m. Step III was empty.
  bool m_prime_exceeds_m = false;
  Color delta1 = kNoColor;
  Color delta2 = kNoColor;
  Color delta3 = kNoColor;
  std::uint64_t dummy_edges = 0;
  std::uint64_t dummy_edges_fed = 0;
  std::size_t step3_edges = 0;
  std::size_t step3_max_residual_degree = 0;
  std::size_t colors_used = 0;
  Color max_color = kNoColor;
  Color h_phase1_colors = 0;
  /// Band extremes of the warm-up run on H, in H colors (before the Δ1 shift).
  Color h_max_tentative_color = kNoColor;
  Color h_min_greedy_color = kNoColor;
};

/// Online general colorer; push() returns the final color of each real edge.
class GeneralColorer {
 public:
  /// Throws Error{kInvalidEpsilon} when 2 eps leaves (0,1) or gives zero rounds.
  GeneralColorer(std::size_t node_count, std::size_t delta, double epsilon, unsigned K, Rng& rng);

  Color push(NodeId u, NodeId v);
  /// Closes the run and fills the end-of-stream metrics.
  const GeneralMetrics& finish();
  const GeneralMetrics& metrics() const { return metrics_; }

  /// H-degrees of every H node given the real edges of Step II fed so far.
  std::vector<std::size_t> h_degrees() const;
  void set_log(DecisionLog* log) { log_ = log; }
  unsigned step() const { return step_; }

 private:
  void start_step_two();
  void start_step_three();
  void note_color(Color c);

  std::size_t n_;
  std::size_t delta_;
  double epsilon_;
  unsigned K_;
  Rng* rng_;
  unsigned step_ = 1;
  std::size_t arrivals_ = 0;
  EstimateStage stage_one_;
  DummyGadget gadget_;
  std::optional<IndexSampler> sampler_;
  std::optional<Interleaver> interleaver_;
  std::optional<WarmupColorer> warmup_;
  std::vector<std::uint32_t> step_two_degree_;
  std::vector<std::uint32_t> step_three_degree_;
  FirstFitBand step_three_;
  std::vector<std::uint32_t> color_count_;
  GeneralMetrics metrics_;
  DecisionLog* log_ = nullptr;
};

struct GeneralResult {
  std::vector<Color> colors;  // per arrival
  std::vector<std::uint8_t> step_of;  // 1, 2 or 3 per arrival
  GeneralMetrics metrics;
  std::vector<std::size_t> h_degrees;  // filled when requested
};

GeneralResult run_general(std::span<const Endpoints> stream, std::size_t n, std::size_t delta, double epsilon,
                          unsigned K, Rng& rng, DecisionLog* log = nullptr, bool want_h_degrees = false);

}  // namespace nibble
