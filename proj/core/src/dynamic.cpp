#include "nibble/dynamic.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nibble {
namespace {

constexpr std::uint64_t kRoundTag = 0x726f756e64ULL;
constexpr std::uint64_t kColorTag = 0x636f6c6f72ULL;

double unit_interval(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

void check_nodes(NodeId u, NodeId v, std::size_t n) {
  if (u == v) throw Error(ErrorCode::kSelfLoop, "update on (" + std::to_string(u) + "," + std::to_string(v) + ")");
  if (u >= n || v >= n) {
    throw Error(ErrorCode::kNodeOutOfRange, "update on (" + std::to_string(u) + "," + std::to_string(v) +
                                                ") with n=" + std::to_string(n));
  }
}

}  // namespace

unsigned capped_geometric(double u, double epsilon, unsigned t) {
  if (t <= 1 || epsilon >= 1.0) return 1;
  if (epsilon <= 0.0) return t;
  const double k = std::floor(std::log1p(-u) / std::log1p(-epsilon));
  if (!(k < static_cast<double>(t - 1))) return t;
  return 1 + static_cast<unsigned>(k);
}

unsigned RoundAssignment::round(NodeId u, NodeId v) const {
  const std::uint64_t key = Endpoints::normalized(u, v).key();
  if (!overrides_.empty()) {
    const auto it = overrides_.find(key);
    if (it != overrides_.end()) return it->second;
  }
  SplitMix64 gen(mix_keys(seed_, key, kRoundTag));
  return capped_geometric(unit_interval(gen()), epsilon_, t_);
}

void RoundAssignment::set_override(NodeId u, NodeId v, unsigned round) {
  overrides_[Endpoints::normalized(u, v).key()] = round;
}

// ---------------------------------------------------------------------------
// Gadget

RegularizingGadget::RegularizingGadget(std::size_t node_count, std::size_t delta)
    : n_(node_count), delta_(delta), words_((delta + 63) / 64), spokes_(node_count * words_, 0),
      present_(node_count, static_cast<std::uint32_t>(delta)) {
  for (NodeId v = 0; v < n_; ++v) {
    for (std::size_t j = 0; j < delta_; ++j) spokes_[v * words_ + j / 64] |= std::uint64_t{1} << (j % 64);
  }
}

std::vector<Endpoints> RegularizingGadget::initial_edges() const {
  std::vector<Endpoints> out;
  out.reserve(n_ * (delta_ + 1) * delta_ / 2);
  for (NodeId v = 0; v < n_; ++v) {
    for (std::size_t a = 0; a < delta_; ++a) out.push_back({v, dummy(v, a)});
    for (std::size_t a = 0; a < delta_; ++a) {
      for (std::size_t b = a + 1; b < delta_; ++b) out.push_back({dummy(v, a), dummy(v, b)});
    }
  }
  return out;
}

std::size_t RegularizingGadget::lowest(NodeId v, bool present) const {
  for (std::size_t w = 0; w < words_; ++w) {
    std::uint64_t word = spokes_[v * words_ + w];
    if (!present) word = ~word;
    if (word != 0) {
      const std::size_t j = w * 64 + static_cast<std::size_t>(std::countr_zero(word));
      if (j < delta_) return j;
    }
  }
  return delta_;
}

void RegularizingGadget::flip(NodeId v, std::size_t j) {
  spokes_[v * words_ + j / 64] ^= std::uint64_t{1} << (j % 64);
  present_[v] = spoke_present(v, j) ? present_[v] + 1 : present_[v] - 1;
}

std::vector<Update> RegularizingGadget::wrap(const Update& update) {
  check_nodes(update.u, update.v, n_);
  const bool insert = update.op == UpdateOp::kInsert;
  const std::size_t i = lowest(update.u, insert);
  const std::size_t j = lowest(update.v, insert);
  if (i == delta_ || j == delta_) {
    throw Error(ErrorCode::kGadgetExhausted,
                std::string(insert ? "no spoke left to remove" : "no missing spoke to restore") + " for (" +
                    std::to_string(update.u) + "," + std::to_string(update.v) + ")");
  }
  flip(update.u, i);
  flip(update.v, j);
  const UpdateOp inverse = insert ? UpdateOp::kDelete : UpdateOp::kInsert;
  return {update, {inverse, update.u, dummy(update.u, i)}, {inverse, update.v, dummy(update.v, j)}};
}

// ---------------------------------------------------------------------------
// Colorer

DynamicColorer::DynamicColorer(std::size_t node_count, const Params& params, std::uint64_t seed,
                               DynamicOptions options)
    : n_(node_count),
      params_(params),
      seed_(seed),
      options_(std::move(options)),
      rounds_(seed, params.epsilon, params.t_eps),
      simple_(0, params.phase1_colors) {
  if (params.t_eps > 255) throw Error(ErrorCode::kInfeasibleParams, "more than 255 rounds");
  for (const auto& [key, r] : options_.round_overrides) {
    rounds_.set_override(static_cast<NodeId>(key >> 32), static_cast<NodeId>(key & 0xffffffffULL), r);
  }
  std::vector<Endpoints> initial;
  if (options_.gadget) {
    gadget_.emplace(node_count, params.delta);
    g_ = Graph(gadget_->total_nodes(), params.delta + 1, Graph::DegreeBound::kUnchecked);
    initial = gadget_->initial_edges();
  } else {
    g_ = Graph(node_count, params.delta, Graph::DegreeBound::kEnforced);
  }
  simple_ = SimpleColor(g_.node_count(), params.phase1_colors);
  bits_.assign((params.phase1_colors + 63) / 64, 0);
  initialize(initial);
}

void DynamicColorer::ensure_edge(EdgeId e) {
  if (e < round_.size()) return;
  const std::size_t size = std::max<std::size_t>(e + 1, round_.size() * 3 / 2);
  round_.resize(size, 0);
  tent_.resize(size, kNoColor);
  failed_.resize(size, 0);
  band_.resize(size, kNoColor);
  final_.resize(size, kNoColor);
  mark_.resize(size, 0);
}

SplitMix64 DynamicColorer::keyed(std::uint64_t t, const Endpoints& ends) const {
  return SplitMix64(mix_keys(seed_ ^ kColorTag, t, ends.key()));
}

void DynamicColorer::palette_bits(EdgeId e, unsigned round, bool previous) {
  std::fill(bits_.begin(), bits_.end(), 0);
  auto block = [&](Color c) {
    if (c != kNoColor) bits_[(c - 1) / 64] |= std::uint64_t{1} << ((c - 1) % 64);
  };
  const Endpoints ends = g_.endpoints(e);
  for (NodeId x : {ends.u, ends.v}) {
    for (const Incidence& inc : g_.incident(x)) {
      const EdgeId f = inc.edge;
      if (f == e || round_[f] >= round) continue;
      if (previous && target_.inserted && f == target_.id) continue;
      Color c = tent_[f];
      if (previous && !changed_old_.empty()) {
        const auto it = changed_old_.find(f);
        if (it != changed_old_.end()) c = it->second;
      }
      block(c);
    }
  }
  if (previous && !target_.inserted && target_.round < round &&
      (target_.ends.touches(ends.u) || target_.ends.touches(ends.v))) {
    block(target_.old_tentative);
  }
}

std::vector<Color> DynamicColorer::palette_list() const {
  std::vector<Color> out;
  const Color colors = params_.phase1_colors;
  for (std::size_t w = 0; w < bits_.size(); ++w) {
    std::uint64_t free = ~bits_[w];
    while (free != 0) {
      const auto c = static_cast<Color>(w * 64 + std::countr_zero(free) + 1);
      if (c > colors) break;
      out.push_back(c);
      free &= free - 1;
    }
  }
  return out;
}

Color DynamicColorer::draw_from_bits(SplitMix64& rng) const {
  const Color colors = params_.phase1_colors;
  auto free_word = [&](std::size_t w) {
    std::uint64_t free = ~bits_[w];
    if (w + 1 == bits_.size() && colors % 64 != 0) free &= (std::uint64_t{1} << (colors % 64)) - 1;
    return free;
  };
  std::size_t count = 0;
  for (std::size_t w = 0; w < bits_.size(); ++w) count += std::popcount(free_word(w));
  if (count == 0) return kNoColor;
  std::size_t k = uniform_index(rng, count);
  for (std::size_t w = 0; w < bits_.size(); ++w) {
    std::uint64_t free = free_word(w);
    const auto pc = static_cast<std::size_t>(std::popcount(free));
    if (k >= pc) {
      k -= pc;
      continue;
    }
    for (; k > 0; --k) free &= free - 1;
    return static_cast<Color>(w * 64 + std::countr_zero(free) + 1);
  }
  return kNoColor;
}

bool DynamicColorer::compute_failed(EdgeId e) const {
  const Color c = tent_[e];
  if (c == kNoColor) return true;
  const Endpoints ends = g_.endpoints(e);
  for (NodeId x : {ends.u, ends.v}) {
    for (const Incidence& inc : g_.incident(x)) {
      if (inc.edge != e && round_[inc.edge] == round_[e] && tent_[inc.edge] == c) return true;
    }
  }
  return false;
}

void DynamicColorer::set_final(EdgeId e, Color c) {
  if (final_[e] == c) return;
  if (is_real_edge(e)) {
    if (final_[e] != kNoColor && --color_count_[final_[e]] == 0) --distinct_;
    if (c != kNoColor) {
      if (c >= color_count_.size()) color_count_.resize(std::max<std::size_t>(c + 1, 2 * color_count_.size()), 0);
      if (color_count_[c]++ == 0) ++distinct_;
    }
  }
  final_[e] = c;
}

void DynamicColorer::initialize(std::span<const Endpoints> edges) {
  const unsigned t = params_.t_eps;
  std::vector<std::vector<EdgeId>> by_round(t + 1);
  for (const Endpoints& ends : edges) {
    const EdgeId e = g_.insert_edge(ends.u, ends.v);
    ensure_edge(e);
    round_[e] = static_cast<std::uint8_t>(rounds_.round(ends.u, ends.v));
    by_round[round_[e]].push_back(e);
  }
  for (unsigned i = 1; i < t; ++i) {
    for (EdgeId e : by_round[i]) {
      palette_bits(e, i, false);
      SplitMix64 rng = keyed(0, g_.endpoints(e));
      tent_[e] = draw_from_bits(rng);
    }
  }
  for (EdgeId e : g_.edge_ids()) {
    if (round_[e] < t) failed_[e] = compute_failed(e) ? 1 : 0;
  }
  for (EdgeId e : g_.edge_ids()) {
    if (round_[e] == t || failed_[e]) {
      const Endpoints ends = g_.endpoints(e);
      band_[e] = simple_.insert(ends.u, ends.v);
    }
    set_final(e, band_[e] != kNoColor ? band_[e] : tent_[e]);
  }
}

SubUpdateReport DynamicColorer::apply_raw(const Update& update) {
  ++sub_t_;
  const unsigned t = params_.t_eps;
  const bool insert = update.op == UpdateOp::kInsert;
  const Endpoints ends = Endpoints::normalized(update.u, update.v);
  const std::size_t events_before = simple_.events();

  SubUpdateReport rep;
  rep.update = update;
  rep.real_edge = ends.v < n_;
  rep.dirty_per_round.assign(t - 1, 0);

  changed_old_.clear();
  std::vector<EdgeId> touched;
  std::vector<EdgeId> changed;
  auto touch = [&](EdgeId e) {
    if (!mark_[e]) {
      mark_[e] = 1;
      touched.push_back(e);
    }
  };

  // Sources of palette change: (endpoints, round) of e* and of every edge
  // whose tentative color changed so far.
  struct Source {
    Endpoints ends;
    unsigned round;
  };
  std::vector<Source> sources;

  if (insert) {
    const EdgeId e = g_.insert_edge(ends.u, ends.v);
    ensure_edge(e);
    round_[e] = static_cast<std::uint8_t>(rounds_.round(ends.u, ends.v));
    tent_[e] = kNoColor;
    failed_[e] = 0;
    band_[e] = kNoColor;
    final_[e] = kNoColor;
    target_ = {e, true, ends, kNoColor, round_[e]};
  } else {
    const auto found = g_.find_edge(ends.u, ends.v);
    if (!found) {
      throw Error(ErrorCode::kMissingEdge, "(" + std::to_string(ends.u) + "," + std::to_string(ends.v) + ")");
    }
    const EdgeId e = *found;
    target_ = {e, false, ends, tent_[e], round_[e]};
    if (band_[e] != kNoColor) simple_.erase(ends.u, ends.v, band_[e]);
    set_final(e, kNoColor);
    g_.delete_edge(ends.u, ends.v);
    round_[e] = 0;
    tent_[e] = kNoColor;
    failed_[e] = 0;
    band_[e] = kNoColor;
    if (target_.round < t && target_.old_tentative != kNoColor) sources.push_back({ends, target_.round});
  }

  std::vector<EdgeId> all;
  if (options_.full_sweep) all = g_.edge_ids();

  // Step I: rounds in increasing order.
  std::vector<EdgeId> candidates;
  for (unsigned i = 1; i < t; ++i) {
    candidates.clear();
    if (options_.full_sweep) {
      for (EdgeId e : all) {
        if (round_[e] == i) candidates.push_back(e);
      }
    } else {
      for (const Source& s : sources) {
        if (s.round >= i) continue;
        for (NodeId x : {s.ends.u, s.ends.v}) {
          for (const Incidence& inc : g_.incident(x)) {
            if (round_[inc.edge] == i) candidates.push_back(inc.edge);
          }
        }
      }
      std::sort(candidates.begin(), candidates.end());
      candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    }
    for (EdgeId e : candidates) {
      if (insert && e == target_.id) continue;
      palette_bits(e, i, true);
      const std::vector<Color> p_prev = palette_list();
      palette_bits(e, i, false);
      const std::vector<Color> p_now = palette_list();
      if (p_prev == p_now) continue;  // TentativelyColor keeps c_prev for any draw
      SplitMix64 rng = keyed(sub_t_, g_.endpoints(e));
      const Color c = tentatively_color(tent_[e], std::span<const Color>(p_prev), std::span<const Color>(p_now), rng);
      if (c == tent_[e]) continue;
      changed_old_.emplace(e, tent_[e]);
      tent_[e] = c;
      touch(e);
      changed.push_back(e);
      ++rep.dirty_per_round[i - 1];
      sources.push_back({g_.endpoints(e), i});
    }
    if (insert && target_.round == i) {
      palette_bits(target_.id, i, false);
      SplitMix64 rng = keyed(sub_t_, ends);
      tent_[target_.id] = draw_from_bits(rng);
      if (tent_[target_.id] != kNoColor) sources.push_back({ends, i});
    }
  }

  // Step II: failed status near every change.
  std::vector<EdgeId> recheck;
  auto add_same_round = [&](const Endpoints& at, unsigned r) {
    for (NodeId x : {at.u, at.v}) {
      for (const Incidence& inc : g_.incident(x)) {
        if (round_[inc.edge] == r) recheck.push_back(inc.edge);
      }
    }
  };
  if (options_.full_sweep) {
    recheck = all;
  } else {
    for (EdgeId e : changed) {
      recheck.push_back(e);
      add_same_round(g_.endpoints(e), round_[e]);
    }
    if (target_.round < t) add_same_round(ends, target_.round);
    std::sort(recheck.begin(), recheck.end());
    recheck.erase(std::unique(recheck.begin(), recheck.end()), recheck.end());
  }
  for (EdgeId e : recheck) {
    if (round_[e] >= t) continue;
    const std::uint8_t now = compute_failed(e) ? 1 : 0;
    if (insert && e == target_.id) {
      failed_[e] = now;
      continue;
    }
    if (now != failed_[e]) {
      failed_[e] = now;
      touch(e);
    }
  }

  // Step III: G_U membership diff, leaves before joins.
  std::vector<EdgeId> joins;
  auto diff = [&](EdgeId e) {
    const bool in_u = round_[e] == t || failed_[e] != 0;
    if (band_[e] != kNoColor && !in_u) {
      const Endpoints at = g_.endpoints(e);
      simple_.erase(at.u, at.v, band_[e]);
      band_[e] = kNoColor;
    } else if (band_[e] == kNoColor && in_u) {
      joins.push_back(e);
    }
  };
  if (options_.full_sweep) {
    for (EdgeId e : all) diff(e);
  } else {
    for (EdgeId e : touched) diff(e);
    if (insert) diff(target_.id);
  }
  std::sort(joins.begin(), joins.end(),
            [&](EdgeId a, EdgeId b) { return g_.endpoints(a).key() < g_.endpoints(b).key(); });
  for (EdgeId e : joins) {
    const Endpoints at = g_.endpoints(e);
    band_[e] = simple_.insert(at.u, at.v);
  }

  for (EdgeId e : touched) {
    mark_[e] = 0;
    const Color now = band_[e] != kNoColor ? band_[e] : tent_[e];
    if (now == final_[e]) continue;
    if (is_real_edge(e)) {
      ++rep.recourse;
    } else {
      ++rep.dummy_recourse;
    }
    set_final(e, now);
  }
  if (insert) set_final(target_.id, band_[target_.id] != kNoColor ? band_[target_.id] : tent_[target_.id]);

  std::size_t dirty = 0;
  for (std::size_t d : rep.dirty_per_round) dirty += d;
  rep.simplecolor_events = simple_.events() - events_before;
  rep.bound_holds = rep.recourse + rep.dummy_recourse <= dirty + 4 * (dirty + 1) + rep.simplecolor_recolors;
  if (options_.check_every_update) check_state();
  sub_log_.push_back(rep);
  return rep;
}

UpdateReport DynamicColorer::apply(const Update& update) {
  check_nodes(update.u, update.v, n_);
  const bool present = g_.has_edge(update.u, update.v);
  if (update.op == UpdateOp::kInsert && present) {
    throw Error(ErrorCode::kDuplicateEdge, "(" + std::to_string(update.u) + "," + std::to_string(update.v) + ")");
  }
  if (update.op == UpdateOp::kDelete && !present) {
    throw Error(ErrorCode::kMissingEdge, "(" + std::to_string(update.u) + "," + std::to_string(update.v) + ")");
  }
  const std::vector<Update> steps = gadget_ ? gadget_->wrap(update) : std::vector<Update>{update};

  UpdateReport rep;
  rep.t = ++updates_;
  rep.update = update;
  rep.dirty_per_round.assign(params_.t_eps - 1, 0);
  for (const Update& step : steps) {
    const SubUpdateReport sub = apply_raw(step);
    rep.recourse += sub.recourse;
    rep.dummy_recourse += sub.dummy_recourse;
    rep.simplecolor_events += sub.simplecolor_events;
    rep.bound_holds = rep.bound_holds && sub.bound_holds;
    for (std::size_t i = 0; i < sub.dirty_per_round.size(); ++i) rep.dirty_per_round[i] += sub.dirty_per_round[i];
  }
  rep.colors_in_use = distinct_;
  return rep;
}

EdgeColoring DynamicColorer::coloring() const {
  EdgeColoring out(g_.edge_id_bound());
  for (EdgeId e : g_.edge_ids()) out.set(e, final_[e]);
  return out;
}

ColoringReport DynamicColorer::verify() const { return verify_proper_coloring(g_, coloring(), true); }

bool DynamicColorer::band_discipline_ok() const {
  const unsigned t = params_.t_eps;
  const Color C = params_.phase1_colors;
  for (EdgeId e : g_.edge_ids()) {
    const bool in_u = round_[e] == t || failed_[e] != 0;
    if (in_u) {
      if (band_[e] <= C || final_[e] != band_[e]) return false;
    } else {
      if (band_[e] != kNoColor || tent_[e] == kNoColor || tent_[e] > C || final_[e] != tent_[e]) return false;
    }
  }
  return true;
}

void DynamicColorer::check_state() const {
  const ColoringReport report = verify();
  if (!report.valid) {
    throw std::logic_error("improper coloring after G' update " + std::to_string(sub_t_));
  }
  if (!band_discipline_ok()) throw std::logic_error("band discipline broken after G' update " + std::to_string(sub_t_));
}

// ---------------------------------------------------------------------------
// Statistics

RecourseStats recourse_stats(std::span<const UpdateReport> log) {
  RecourseStats s;
  s.updates = log.size();
  if (log.empty()) return s;
  double total = 0.0;
  double dummy = 0.0;
  for (const UpdateReport& r : log) {
    total += static_cast<double>(r.recourse);
    dummy += static_cast<double>(r.dummy_recourse);
    s.max = std::max(s.max, r.recourse);
    if (r.recourse >= s.histogram.size()) s.histogram.resize(r.recourse + 1, 0);
    ++s.histogram[r.recourse];
    if (s.mean_dirty.size() < r.dirty_per_round.size()) s.mean_dirty.resize(r.dirty_per_round.size(), 0.0);
    for (std::size_t i = 0; i < r.dirty_per_round.size(); ++i) s.mean_dirty[i] += static_cast<double>(r.dirty_per_round[i]);
    if (!r.bound_holds) ++s.bound_violations;
  }
  const auto count = static_cast<double>(log.size());
  s.mean = total / count;
  s.mean_dummy = dummy / count;
  for (double& d : s.mean_dirty) d /= count;
  return s;
}

DirtyStats dirty_stats(std::span<const SubUpdateReport> log) {
  DirtyStats s;
  s.samples = log.size();
  if (log.empty()) return s;
  const std::size_t rounds = log.front().dirty_per_round.size();
  std::vector<double> sum(rounds, 0.0), sum_sq(rounds, 0.0), below(rounds, 0.0);
  for (const SubUpdateReport& r : log) {
    double prefix = 0.0;
    for (std::size_t i = 0; i < rounds; ++i) {
      const auto d = static_cast<double>(r.dirty_per_round[i]);
      sum[i] += d;
      sum_sq[i] += d * d;
      below[i] += prefix;
      prefix += d;
    }
  }
  const auto n = static_cast<double>(log.size());
  for (std::size_t i = 0; i < rounds; ++i) {
    const double mean = sum[i] / n;
    const double var = n > 1 ? std::max(0.0, (sum_sq[i] - n * mean * mean) / (n - 1)) : 0.0;
    s.mean.push_back(mean);
    s.stderr_mean.push_back(std::sqrt(var / n));
    s.mean_below.push_back(below[i] / n);
  }
  return s;
}

}  // namespace nibble
