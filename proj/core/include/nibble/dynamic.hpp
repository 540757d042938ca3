#pragma once

// Dynamic low-recourse coloring.
//
// The real graph G is embedded in G', where every real node v owns Δ dummy
// nodes and {v, v_1, ..., v_Δ} starts out as a clique. A real insertion (u,v)
// removes the lowest present spokes (u,u_i), (v,v_j); a deletion restores the
// lowest missing ones. G' thus stays near-regular, and each real update
// becomes three G' updates.
//
// Every node pair has a fixed round drawn from CappedGeo(eps, t). After each G'
// update the tentative colors of rounds 1..t-1 are brought up to date round by
// round with TentativelyColor, failed edges are recomputed, and the edges that
// are failed or sit in round t are colored first-fit above C.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "nibble/first_fit.hpp"
#include "nibble/graph.hpp"
#include "nibble/params.hpp"
#include "nibble/random.hpp"

namespace nibble {

/// Inverse-cdf draw from CappedGeo(eps, t) for u in [0,1):
/// min(t, 1 + floor(ln(1-u) / ln(1-eps))).
unsigned capped_geometric(double u, double epsilon, unsigned t);

/// Round of every unordered node pair. A pure function of (seed, pair), so a
/// pair keeps its round across deletions and re-insertions without a memo.
class RoundAssignment {
 public:
  RoundAssignment(std::uint64_t seed, double epsilon, unsigned t) : seed_(seed), epsilon_(epsilon), t_(t) {}

  unsigned round(NodeId u, NodeId v) const;
  /// Pins a pair to a round (scripted experiments).
  void set_override(NodeId u, NodeId v, unsigned round);

  unsigned t() const { return t_; }

 private:
  std::uint64_t seed_;
  double epsilon_;
  unsigned t_;
  std::unordered_map<std::uint64_t, unsigned> overrides_;
};

inline unsigned assign_round(NodeId u, NodeId v, const RoundAssignment& ra) { return ra.round(u, v); }

/// One step of TentativelyColor. Palettes are ascending color lists.
template <class Gen>
Color tentatively_color(Color c_prev, std::span<const Color> p_prev, std::span<const Color> p_now, Gen& rng) {
  auto contains = [](std::span<const Color> p, Color c) { return std::binary_search(p.begin(), p.end(), c); };
  auto draw = [&]() { return p_now.empty() ? kNoColor : p_now[uniform_index(rng, p_now.size())]; };
  if (c_prev != kNoColor && contains(p_prev, c_prev) && !contains(p_now, c_prev)) return draw();
  const Color c = draw();
  if (c == kNoColor || !contains(p_prev, c)) return c;
  return c_prev;
}

/// Spoke bookkeeping of the regularizing gadget.
class RegularizingGadget {
 public:
  RegularizingGadget(std::size_t node_count, std::size_t delta);

  std::size_t real_nodes() const { return n_; }
  std::size_t delta() const { return delta_; }
  std::size_t total_nodes() const { return n_ * (delta_ + 1); }
  /// j in [0, Δ): the node v_{j+1}.
  NodeId dummy(NodeId v, std::size_t j) const { return static_cast<NodeId>(n_ + v * delta_ + j); }
  bool is_real(NodeId x) const { return x < n_; }
  bool spoke_present(NodeId v, std::size_t j) const { return (spokes_[v * words_ + j / 64] >> (j % 64)) & 1U; }
  std::size_t spokes_present(NodeId v) const { return present_[v]; }

  /// Edges of G' before any update: the (Δ+1)-clique of every real node.
  std::vector<Endpoints> initial_edges() const;

  /// Translates one real update into G' updates and records the spoke changes.
  /// Throws Error{kGadgetExhausted} if an endpoint has no spoke left to trade.
  std::vector<Update> wrap(const Update& update);

 private:
  std::size_t lowest(NodeId v, bool present) const;
  void flip(NodeId v, std::size_t j);

  std::size_t n_;
  std::size_t delta_;
  std::size_t words_;
  std::vector<std::uint64_t> spokes_;  // bit j of row v: spoke (v, v_{j+1}) present
  std::vector<std::uint32_t> present_;
};

inline std::vector<Update> gadget_wrap(const Update& update, RegularizingGadget& gadget) {
  return gadget.wrap(update);
}

/// First-fit coloring above a floor with deletion freeing the color.
class SimpleColor {
 public:
  SimpleColor(std::size_t node_count, Color floor) : band_(node_count, floor) {}

  Color insert(NodeId u, NodeId v) {
    ++events_;
    return band_.assign(u, v);
  }
  void erase(NodeId u, NodeId v, Color c) {
    ++events_;
    band_.release(u, v, c);
  }
  std::size_t events() const { return events_; }

 private:
  FirstFitBand band_;
  std::size_t events_ = 0;
};

struct DynamicOptions {
  /// Wrap real updates with the regularizing gadget. Off: G' = G, and the Δ
  /// bound is enforced on G.
  bool gadget = true;
  /// Literal Step I/II/III over every edge instead of the dependency cone.
  bool full_sweep = false;
  /// Verify properness and band discipline after every G' update.
  bool check_every_update = false;
  /// Scripted rounds, keyed by Endpoints::key().
  std::unordered_map<std::uint64_t, unsigned> round_overrides;
};

/// Result of one G' update.
struct SubUpdateReport {
  Update update;
  bool real_edge = false;
  std::size_t recourse = 0;        // real edges other than e* with a new final color
  std::size_t dummy_recourse = 0;  // same for dummy edges
  std::vector<std::size_t> dirty_per_round;  // |D_i|, i = 1 .. t-1, e* excluded
  std::size_t simplecolor_events = 0;
  std::size_t simplecolor_recolors = 0;  // edges kept in G_U but recolored
  /// recourse + dummy_recourse <= |D| + 4(|D| + 1) + simplecolor_recolors
  bool bound_holds = true;
};

/// Result of one real update (sum over its G' updates).
struct UpdateReport {
  std::size_t t = 0;  // 1-based
  Update update;
  std::size_t recourse = 0;
  std::size_t dummy_recourse = 0;
  std::vector<std::size_t> dirty_per_round;
  std::size_t simplecolor_events = 0;
  std::size_t colors_in_use = 0;
  bool bound_holds = true;
};

class DynamicColorer {
 public:
  /// Builds G' (the gadget cliques, or nothing in gadget-off mode) and colors
  /// it with one static pass.
  DynamicColorer(std::size_t node_count, const Params& params, std::uint64_t seed, DynamicOptions options = {});

  /// Applies a real update. Throws Error{kDuplicateEdge, kMissingEdge,
  /// kSelfLoop, kNodeOutOfRange, kGadgetExhausted, kDegreeBoundExceeded}.
  UpdateReport apply(const Update& update);
  /// Applies one G' update directly.
  SubUpdateReport apply_raw(const Update& update);

  const Graph& graph() const { return g_; }
  const Params& params() const { return params_; }
  std::size_t real_nodes() const { return n_; }
  bool is_real_edge(EdgeId e) const {
    const Endpoints ends = g_.endpoints(e);
    return ends.u < n_ && ends.v < n_;
  }
  unsigned round_of(EdgeId e) const { return round_[e]; }
  Color tentative(EdgeId e) const { return tent_[e]; }
  bool failed(EdgeId e) const { return failed_[e] != 0; }
  Color final_color(EdgeId e) const { return final_[e]; }
  EdgeColoring coloring() const;
  /// Distinct final colors on real edges.
  std::size_t colors_in_use() const { return distinct_; }
  std::size_t updates() const { return updates_; }
  const std::vector<SubUpdateReport>& sub_log() const { return sub_log_; }

  /// Properness of the final coloring on G'.
  ColoringReport verify() const;
  /// Tentative-band colors within [1, C] and SimpleColor colors above C,
  /// with each edge holding exactly the color its state dictates.
  bool band_discipline_ok() const;

 private:
  // The edge being inserted or deleted by the current G' update.
  struct Target {
    EdgeId id = 0;
    bool inserted = false;
    Endpoints ends;
    Color old_tentative = kNoColor;
    unsigned round = 0;
  };

  void ensure_edge(EdgeId e);
  /// Blocked colors of P_round(e) into bits_, now or as of the previous update.
  void palette_bits(EdgeId e, unsigned round, bool previous);
  std::vector<Color> palette_list() const;
  Color draw_from_bits(SplitMix64& rng) const;
  bool compute_failed(EdgeId e) const;
  void set_final(EdgeId e, Color c);
  SplitMix64 keyed(std::uint64_t t, const Endpoints& ends) const;
  void initialize(std::span<const Endpoints> edges);
  void check_state() const;

  std::size_t n_;
  Params params_;
  std::uint64_t seed_;
  DynamicOptions options_;
  RoundAssignment rounds_;
  Graph g_;
  std::optional<RegularizingGadget> gadget_;
  SimpleColor simple_;

  std::vector<std::uint8_t> round_;
  std::vector<Color> tent_;
  std::vector<std::uint8_t> failed_;
  std::vector<Color> band_;
  std::vector<Color> final_;

  std::vector<std::uint32_t> color_count_;  // real edges per final color
  std::size_t distinct_ = 0;
  std::uint64_t sub_t_ = 0;
  std::size_t updates_ = 0;
  std::vector<SubUpdateReport> sub_log_;
  Target target_;
  std::unordered_map<EdgeId, Color> changed_old_;  // tentative colors before this G' update
  std::vector<std::uint64_t> bits_;  // palette scratch, bit set = blocked
  std::vector<std::uint8_t> mark_;   // per-edge scratch flags
};

struct RecourseStats {
  std::size_t updates = 0;
  double mean = 0.0;
  std::size_t max = 0;
  std::vector<std::size_t> histogram;  // histogram[r] = updates with recourse r
  double mean_dummy = 0.0;
  std::vector<double> mean_dirty;  // per round
  std::size_t bound_violations = 0;
};

RecourseStats recourse_stats(std::span<const UpdateReport> log);

/// Per-round moments of dirty-set sizes for the D_i vs D_{<i} comparison.
struct DirtyStats {
  std::size_t samples = 0;
  std::vector<double> mean;         // E|D_i|
  std::vector<double> stderr_mean;  // standard error of the mean of |D_i|
  std::vector<double> mean_below;   // E|D_{<i}|
};

DirtyStats dirty_stats(std::span<const SubUpdateReport> log);

}  // namespace nibble
