#include "nibble/basic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>
#include <tuple>

#include "nibble/first_fit.hpp"

namespace nibble {

// ---------------------------------------------------------------------------
// BlockedColors

BlockedColors::BlockedColors(std::size_t node_count, Color colors)
    : colors_(colors), words_((colors + 63) / 64), bits_(node_count * words_, 0) {}

std::uint64_t BlockedColors::free_word(NodeId u, NodeId v, std::size_t w) const {
  std::uint64_t free = ~(bits_[u * words_ + w] | bits_[v * words_ + w]);
  if (w + 1 == words_ && colors_ % 64 != 0) free &= (std::uint64_t{1} << (colors_ % 64)) - 1;
  return free;
}

std::size_t BlockedColors::node_palette_size(NodeId v) const { return palette_size(v, v); }

std::size_t BlockedColors::palette_size(NodeId u, NodeId v) const {
  std::size_t total = 0;
  for (std::size_t w = 0; w < words_; ++w) total += std::popcount(free_word(u, v, w));
  return total;
}

void BlockedColors::palette(NodeId u, NodeId v, std::vector<Color>& out) const {
  out.clear();
  for (std::size_t w = 0; w < words_; ++w) {
    std::uint64_t free = free_word(u, v, w);
    while (free != 0) {
      out.push_back(static_cast<Color>(w * 64 + std::countr_zero(free) + 1));
      free &= free - 1;
    }
  }
}

Color BlockedColors::palette_element(NodeId u, NodeId v, std::size_t k) const {
  for (std::size_t w = 0; w < words_; ++w) {
    std::uint64_t free = free_word(u, v, w);
    const auto count = static_cast<std::size_t>(std::popcount(free));
    if (k >= count) {
      k -= count;
      continue;
    }
    for (; k > 0; --k) free &= free - 1;
    return static_cast<Color>(w * 64 + std::countr_zero(free) + 1);
  }
  return kNoColor;
}

void SummaryStats::add(double x) {
  if (count == 0) {
    min = max = x;
  } else {
    min = std::min(min, x);
    max = std::max(max, x);
  }
  mean += (x - mean) / static_cast<double>(++count);
}

// ---------------------------------------------------------------------------
// Round primitives

RoundState::RoundState(const Graph& g, const Params& p)
    : graph(&g),
      colors(p.phase1_colors),
      live(g.edge_ids()),
      round_of(g.edge_id_bound(), 0),
      tentative(g.edge_id_bound(), kNoColor),
      failed(g.edge_id_bound(), 0),
      blocked(g.node_count(), p.phase1_colors),
      partial(g.edge_id_bound()) {}

const std::vector<EdgeId>& sample_round(RoundState& state, double epsilon, Rng& rng) {
  state.sampled.clear();
  std::vector<EdgeId> remaining;
  remaining.reserve(state.live.size());
  for (EdgeId e : state.live) {
    if (bernoulli(rng, epsilon)) {
      state.sampled.push_back(e);
      state.round_of[e] = state.round;
    } else {
      remaining.push_back(e);
    }
  }
  state.live = std::move(remaining);
  return state.sampled;
}

std::vector<Color> compute_palette(const RoundState& state, EdgeId e) {
  std::vector<Color> out;
  const Endpoints ends = state.graph->endpoints(e);
  state.blocked.palette(ends.u, ends.v, out);
  return out;
}

Color tentative_color(std::span<const Color> palette, Rng& rng) {
  if (palette.empty()) return kNoColor;
  return palette[uniform_index(rng, palette.size())];
}

void draw_tentative_colors(RoundState& state, Rng& rng) {
  for (EdgeId e : state.sampled) {
    const Endpoints ends = state.graph->endpoints(e);
    const std::size_t size = state.blocked.palette_size(ends.u, ends.v);
    // Same draw as tentative_color() on the materialized ascending palette.
    state.tentative[e] = size == 0 ? kNoColor : state.blocked.palette_element(ends.u, ends.v, uniform_index(rng, size));
  }
}

std::vector<EdgeId> resolve_failures(RoundState& state) {
  const Graph& g = *state.graph;
  // (node, color, edge) for every non-null tentative color; equal (node,
  // color) runs are same-round collisions.
  std::vector<std::tuple<NodeId, Color, EdgeId>> picks;
  picks.reserve(2 * state.sampled.size());
  for (EdgeId e : state.sampled) {
    const Color c = state.tentative[e];
    if (c == kNoColor) {
      state.failed[e] = 1;
      continue;
    }
    const Endpoints ends = g.endpoints(e);
    picks.emplace_back(ends.u, c, e);
    picks.emplace_back(ends.v, c, e);
  }
  std::sort(picks.begin(), picks.end());
  for (std::size_t k = 0; k < picks.size();) {
    std::size_t end = k + 1;
    while (end < picks.size() && std::get<0>(picks[end]) == std::get<0>(picks[k]) &&
           std::get<1>(picks[end]) == std::get<1>(picks[k])) {
      ++end;
    }
    if (end - k > 1) {
      for (std::size_t j = k; j < end; ++j) state.failed[std::get<2>(picks[j])] = 1;
    }
    k = end;
  }

  std::vector<EdgeId> failed_now;
  for (EdgeId e : state.sampled) {
    const Endpoints ends = g.endpoints(e);
    const Color c = state.tentative[e];
    if (c != kNoColor) {
      state.blocked.block(ends.u, c);
      state.blocked.block(ends.v, c);
    }
    if (state.failed[e]) {
      failed_now.push_back(e);
      state.failed_edges.push_back(e);
    } else {
      state.partial.set(e, c);
    }
  }
  ++state.round;
  return failed_now;
}

// ---------------------------------------------------------------------------
// Phase one with optional event measurements

namespace {

bool in_round(const RoundState& state, EdgeId e) {
  return state.round_of[e] == 0 || state.round_of[e] == state.round;
}

void measure_before_colors(const RoundState& state, std::span<const EdgeId> live_before,
                           const EventSampling& opts, Rng& diag, RoundTrace& trace) {
  const Graph& g = *state.graph;
  const std::size_t n = g.node_count();
  const Color colors = state.colors;

  auto record_palette = [&](EdgeId e) {
    const Endpoints ends = g.endpoints(e);
    const auto size = static_cast<double>(state.blocked.palette_size(ends.u, ends.v));
    trace.palette_sizes.push_back(size);
    trace.palette_size.add(size);
  };
  if (opts.full_sweep || live_before.size() <= opts.budget) {
    for (EdgeId e : live_before) record_palette(e);
  } else {
    for (std::size_t k = 0; k < opts.budget; ++k) record_palette(live_before[uniform_index(diag, live_before.size())]);
  }

  auto record_node = [&](NodeId v) {
    std::size_t neighborhood = 0;
    std::size_t sampled = 0;
    for (const Incidence& inc : g.incident(v)) {
      if (!in_round(state, inc.edge)) continue;
      ++neighborhood;
      if (state.round_of[inc.edge] == state.round) ++sampled;
    }
    if (neighborhood > 0) {
      trace.node_sample_fractions.push_back(static_cast<double>(sampled) / static_cast<double>(neighborhood));
    }
  };
  if (opts.full_sweep || n <= opts.budget) {
    for (NodeId v = 0; v < n; ++v) record_node(v);
  } else {
    for (std::size_t k = 0; k < opts.budget; ++k) record_node(static_cast<NodeId>(uniform_index(diag, n)));
  }

  auto record_pair = [&](NodeId v, Color c) {
    std::size_t c_degree = 0;
    std::size_t sampled = 0;
    for (const Incidence& inc : g.incident(v)) {
      if (!in_round(state, inc.edge) || state.blocked.blocked(inc.neighbor, c)) continue;
      ++c_degree;
      if (state.round_of[inc.edge] == state.round) ++sampled;
    }
    trace.c_degrees.push_back(static_cast<double>(c_degree));
    trace.c_degree.add(static_cast<double>(c_degree));
    if (c_degree > 0) {
      trace.color_sample_fractions.push_back(static_cast<double>(sampled) / static_cast<double>(c_degree));
    }
  };
  if (opts.full_sweep) {
    for (NodeId v = 0; v < n; ++v) {
      for (Color c = 1; c <= colors; ++c) record_pair(v, c);
    }
  } else if (n > 0 && colors > 0) {
    for (std::size_t k = 0; k < opts.budget; ++k) {
      const auto v = static_cast<NodeId>(uniform_index(diag, n));
      const auto c = static_cast<Color>(1 + uniform_index(diag, colors));
      record_pair(v, c);
    }
  }
}

void measure_failures(const RoundState& state, unsigned round, std::span<const EdgeId> sampled,
                      bool record_fractions, RoundTrace& trace) {
  const Graph& g = *state.graph;
  std::vector<std::uint32_t> failed_deg(g.node_count(), 0);
  std::vector<std::uint32_t> sampled_deg(record_fractions ? g.node_count() : 0, 0);
  for (EdgeId e : sampled) {
    const Endpoints ends = g.endpoints(e);
    if (record_fractions) {
      ++sampled_deg[ends.u];
      ++sampled_deg[ends.v];
    }
    if (state.failed[e]) {
      ++failed_deg[ends.u];
      ++failed_deg[ends.v];
    }
  }
  (void)round;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    trace.failed_max_degree = std::max<std::size_t>(trace.failed_max_degree, failed_deg[v]);
    if (record_fractions && sampled_deg[v] > 0) {
      trace.node_failed_fractions.push_back(static_cast<double>(failed_deg[v]) / sampled_deg[v]);
    }
  }
}

void check_regularity(const Graph& g, const Params& params) {
  const double eps2 = params.epsilon * params.epsilon;
  const double lo = (1.0 - eps2) * static_cast<double>(params.delta) - 1e-9;
  const double hi = (1.0 + eps2) * static_cast<double>(params.delta) + 1e-9;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const auto d = static_cast<double>(g.degree(v));
    if (d < lo || d > hi) {
      throw Error(ErrorCode::kDegreeOutOfRange,
                  "node " + std::to_string(v) + " has degree " + std::to_string(g.degree(v)) +
                      " outside [(1-eps^2)Δ, (1+eps^2)Δ]");
    }
  }
}

}  // namespace

PhaseOneResult run_phase_one(const Graph& g, const Params& params, Rng& rng, const PhaseOneOptions& options) {
  if (options.strict_regularity) check_regularity(g, params);

  RoundState state(g, params);
  Rng diag(options.events.seed);
  PhaseOneResult result;

  for (unsigned i = 1; i < params.t_eps; ++i) {
    RoundTrace trace;
    trace.round = i;
    trace.live = state.live.size();
    std::vector<EdgeId> live_before;
    if (options.events.enabled) live_before = state.live;

    sample_round(state, params.epsilon, rng);
    trace.sampled = state.sampled.size();
    if (options.events.enabled) measure_before_colors(state, live_before, options.events, diag, trace);

    draw_tentative_colors(state, rng);
    const std::vector<EdgeId> sampled = state.sampled;
    const std::vector<EdgeId> failed = resolve_failures(state);
    trace.failed = failed.size();
    measure_failures(state, i, sampled, options.events.enabled, trace);
    result.trace.push_back(std::move(trace));
  }

  result.partial = std::move(state.partial);
  result.failed = std::move(state.failed_edges);
  std::sort(result.failed.begin(), result.failed.end());
  result.tail = std::move(state.live);
  result.round_of = std::move(state.round_of);
  result.tentative = std::move(state.tentative);
  return result;
}

EdgeColoring run_phase_two(const Graph& g, EdgeColoring partial, std::span<const EdgeId> uncolored, Color floor) {
  FirstFitBand band(g.node_count(), floor);
  for (EdgeId e : uncolored) {
    const Endpoints ends = g.endpoints(e);
    partial.set(e, band.assign(ends.u, ends.v));
  }
  return partial;
}

BasicResult run_basic(const Graph& g, const Params& params, Rng& rng, const PhaseOneOptions& options) {
  BasicResult result;
  result.phase_one = run_phase_one(g, params, rng, options);
  const PhaseOneResult& one = result.phase_one;

  std::vector<EdgeId> uncolored;
  uncolored.reserve(one.failed.size() + one.tail.size());
  std::merge(one.failed.begin(), one.failed.end(), one.tail.begin(), one.tail.end(), std::back_inserter(uncolored));

  std::vector<std::uint32_t> uncolored_deg(g.node_count(), 0);
  for (EdgeId e : uncolored) {
    const Endpoints ends = g.endpoints(e);
    ++uncolored_deg[ends.u];
    ++uncolored_deg[ends.v];
  }

  BasicMetrics& m = result.metrics;
  m.phase1_colors = params.phase1_colors;
  m.phase_one_colored = g.edge_count() - uncolored.size();
  for (std::uint32_t d : uncolored_deg) m.uncolored_max_degree = std::max<std::size_t>(m.uncolored_max_degree, d);
  for (const RoundTrace& t : one.trace) {
    m.failure_fraction.push_back(t.sampled == 0 ? 0.0 : static_cast<double>(t.failed) / t.sampled);
  }

  result.coloring = run_phase_two(g, one.partial, uncolored, params.phase1_colors);
  const ColorUsage usage = color_usage(g, result.coloring);
  m.colors_used = usage.distinct;
  m.max_color = usage.max_color;
  return result;
}

}  // namespace nibble
