#include "nibble/random_order.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace nibble {
namespace {

void check_arrival(NodeId u, NodeId v, std::size_t node_count) {
  if (u == v) throw Error(ErrorCode::kSelfLoop, "arrival (" + std::to_string(u) + "," + std::to_string(v) + ")");
  if (u >= node_count || v >= node_count) {
    throw Error(ErrorCode::kNodeOutOfRange, "arrival (" + std::to_string(u) + "," + std::to_string(v) +
                                                ") with n=" + std::to_string(node_count));
  }
}

void count_color(std::vector<std::uint32_t>& counts, std::size_t& distinct, Color& max_color, Color c) {
  if (c >= counts.size()) counts.resize(std::max<std::size_t>(c + 1, 2 * counts.size()), 0);
  if (counts[c]++ == 0) ++distinct;
  max_color = std::max(max_color, c);
}

}  // namespace

std::vector<std::size_t> binomial_prefix_partition(std::size_t total, double epsilon, unsigned rounds, Rng& rng) {
  std::vector<std::size_t> cuts;
  cuts.reserve(rounds);
  std::size_t b = 0;
  for (unsigned i = 0; i < rounds; ++i) {
    b += std::binomial_distribution<std::size_t>(total - b, epsilon)(rng);
    cuts.push_back(b);
  }
  return cuts;
}

// ---------------------------------------------------------------------------
// Warm-up

WarmupColorer::WarmupColorer(const Params& params, std::size_t node_count, std::size_t m, Rng& rng)
    : params_(params),
      m_(m),
      rng_(&rng),
      blocked_(node_count, params.phase1_colors),
      pending_(node_count, params.phase1_colors),
      greedy_(node_count, params.phase1_colors) {
  metrics_.phase1_colors = params.phase1_colors;
  metrics_.boundaries = binomial_prefix_partition(m, params.epsilon, params.phase_one_rounds(), rng);
}

void WarmupColorer::advance_round() {
  const std::size_t k = arrivals_ + 1;
  const auto& cuts = metrics_.boundaries;
  while (round_ <= cuts.size() && k > cuts[round_ - 1]) {
    for (auto [x, c] : pending_list_) {
      blocked_.block(x, c);
      pending_.unblock(x, c);
    }
    pending_list_.clear();
    ++round_;
  }
}

Color WarmupColorer::push(NodeId u, NodeId v) {
  check_arrival(u, v, greedy_.node_count());
  advance_round();
  ++arrivals_;

  Color chosen = kNoColor;
  if (round_ <= metrics_.boundaries.size()) {
    const std::size_t size = blocked_.palette_size(u, v);
    const Color c = size == 0 ? kNoColor : blocked_.palette_element(u, v, uniform_index(*rng_, size));
    if (c != kNoColor) {
      const bool clash = pending_.blocked(u, c) || pending_.blocked(v, c);
      pending_.block(u, c);
      pending_.block(v, c);
      pending_list_.emplace_back(u, c);
      pending_list_.emplace_back(v, c);
      if (!clash) chosen = c;
    }
  }
  if (chosen != kNoColor) {
    ++metrics_.tentative_band_edges;
    metrics_.max_tentative_color = std::max(metrics_.max_tentative_color, chosen);
  } else {
    chosen = greedy_.assign(u, v);
    ++metrics_.greedy_band_edges;
    metrics_.min_greedy_color =
        metrics_.min_greedy_color == kNoColor ? chosen : std::min(metrics_.min_greedy_color, chosen);
  }
  count_color(color_count_, metrics_.colors_used, metrics_.max_color, chosen);
  if (log_ != nullptr) log_->push_back({arrivals_ - 1, Endpoints::normalized(u, v), chosen});
  return chosen;
}

WarmupResult run_warmup(std::span<const Endpoints> stream, const Params& params, std::size_t m, Rng& rng,
                        DecisionLog* log) {
  if (stream.size() != m) {
    throw Error(ErrorCode::kStreamLengthMismatch,
                "stream has " + std::to_string(stream.size()) + " edges, m=" + std::to_string(m));
  }
  WarmupColorer colorer(params, params.n, m, rng);
  colorer.set_log(log);
  WarmupResult result;
  result.colors.reserve(stream.size());
  std::vector<std::uint32_t> degree(params.n, 0);
  for (const Endpoints& e : stream) {
    result.colors.push_back(colorer.push(e.u, e.v));
    ++degree[e.u];
    ++degree[e.v];
  }
  result.metrics = colorer.metrics();
  const double eps2 = params.epsilon * params.epsilon;
  const double lo = (1.0 - eps2) * static_cast<double>(params.delta) - 1e-9;
  const double hi = (1.0 + eps2) * static_cast<double>(params.delta) + 1e-9;
  for (std::uint32_t d : degree) {
    if (d < lo || d > hi) {
      result.metrics.regularity_warning = true;
      break;
    }
  }
  return result;
}

WarmupResult run_warmup(std::span<const Endpoints> stream, std::size_t n, std::size_t delta, std::size_t m,
                        double epsilon, unsigned K, Rng& rng, DecisionLog* log) {
  return run_warmup(stream, derive_params(n, delta, epsilon, K), m, rng, log);
}

// ---------------------------------------------------------------------------
// Step I

std::size_t degree_trigger(double epsilon, std::size_t delta) {
  const double raw = std::ceil(epsilon * static_cast<double>(delta) - 1e-9);
  return std::max<std::size_t>(1, static_cast<std::size_t>(raw));
}

std::size_t estimate_length(std::size_t T, double epsilon) {
  return static_cast<std::size_t>(std::floor(static_cast<double>(T) / (epsilon * (1.0 + epsilon * epsilon)) + 1e-9));
}

EstimateStage::EstimateStage(std::size_t node_count, std::size_t delta, double epsilon)
    : epsilon_(epsilon), trigger_(degree_trigger(epsilon, delta)), degree_(node_count, 0), band_(node_count, 0) {}

Color EstimateStage::push(NodeId u, NodeId v) {
  check_arrival(u, v, degree_.size());
  const Color c = band_.assign(u, v);
  max_color_ = std::max(max_color_, c);
  ++T_;
  ++degree_[u];
  ++degree_[v];
  if (degree_[u] >= trigger_ || degree_[v] >= trigger_) triggered_ = true;
  return c;
}

EstimateResult estimate_stage(std::span<const Endpoints> stream, std::size_t node_count, double epsilon,
                              std::size_t delta) {
  EstimateStage stage(node_count, delta, epsilon);
  EstimateResult result;
  for (const Endpoints& e : stream) {
    result.colors.push_back(stage.push(e.u, e.v));
    if (stage.triggered()) break;
  }
  result.T = stage.T();
  result.triggered = stage.triggered();
  result.dT = stage.degrees();
  result.m_prime = stage.m_prime();
  result.delta1 = stage.max_color();
  return result;
}

// ---------------------------------------------------------------------------
// Dummy gadget

std::uint32_t spoke_count(std::uint32_t dT, double epsilon, std::size_t delta) {
  const double raw = static_cast<double>(delta) - (1.0 / epsilon - 1.0) * static_cast<double>(dT);
  const double rounded = std::round(raw);
  if (rounded <= 0.0) return 0;
  return static_cast<std::uint32_t>(std::min(rounded, static_cast<double>(delta)));
}

DummyGadget::DummyGadget(std::size_t node_count, std::size_t delta, std::vector<std::uint32_t> spokes)
    : n_(node_count),
      delta_(delta),
      per_clique_(static_cast<std::uint64_t>(delta) * (delta == 0 ? 0 : delta - 1) / 2),
      spokes_(std::move(spokes)) {
  spoke_prefix_.reserve(n_ + 1);
  for (std::uint32_t s : spokes_) spoke_prefix_.push_back(spoke_prefix_.back() + s);
}

Endpoints DummyGadget::edge(std::uint64_t index) const {
  if (index < clique_edges()) {
    const auto v = static_cast<NodeId>(index / per_clique_);
    const std::uint64_t q = index % per_clique_;
    // Row a holds pairs (a, b), b > a; rows before a hold a(2Δ-a-1)/2 pairs.
    const double d = static_cast<double>(delta_);
    auto a = static_cast<std::uint64_t>((2.0 * d - 1.0 - std::sqrt((2.0 * d - 1.0) * (2.0 * d - 1.0) - 8.0 * q)) / 2.0);
    auto before = [&](std::uint64_t r) { return r * (2 * delta_ - r - 1) / 2; };
    while (a > 0 && before(a) > q) --a;
    while (before(a + 1) <= q) ++a;
    const std::uint64_t b = a + 1 + (q - before(a));
    return {dummy_node(v, a), dummy_node(v, b)};
  }
  const std::uint64_t s = index - clique_edges();
  const auto it = std::upper_bound(spoke_prefix_.begin(), spoke_prefix_.end(), s);
  const auto v = static_cast<NodeId>(it - spoke_prefix_.begin() - 1);
  return {v, dummy_node(v, s - spoke_prefix_[v])};
}

std::size_t DummyGadget::dummy_degree(NodeId x) const {
  if (x < n_) return spokes_[x];
  const std::size_t v = (x - n_) / delta_;
  const std::size_t j = (x - n_) % delta_;
  return delta_ - 1 + (j < spokes_[v] ? 1 : 0);
}

DummyGadget build_dummy_gadget(std::span<const std::uint32_t> dT, double epsilon, std::size_t delta) {
  std::vector<std::uint32_t> spokes(dT.size());
  for (std::size_t v = 0; v < dT.size(); ++v) spokes[v] = spoke_count(dT[v], epsilon, delta);
  return DummyGadget(dT.size(), delta, std::move(spokes));
}

// ---------------------------------------------------------------------------
// Sampling without replacement

IndexSampler::IndexSampler(std::uint64_t size)
    : size_(size), remaining_(size), free_((size + 63) / 64, ~std::uint64_t{0}), fenwick_(free_.size() + 1, 0) {
  if (size % 64 != 0) free_.back() = (std::uint64_t{1} << (size % 64)) - 1;
  // O(W) Fenwick build.
  for (std::size_t i = 1; i <= free_.size(); ++i) {
    fenwick_[i] += static_cast<std::uint32_t>(std::popcount(free_[i - 1]));
    const std::size_t parent = i + (i & (~i + 1));
    if (parent <= free_.size()) fenwick_[parent] += fenwick_[i];
  }
  while (top_bit_ * 2 <= free_.size()) top_bit_ *= 2;
}

void IndexSampler::fenwick_add(std::size_t word, std::int64_t delta) {
  for (std::size_t i = word + 1; i <= free_.size(); i += i & (~i + 1)) {
    fenwick_[i] = static_cast<std::uint32_t>(static_cast<std::int64_t>(fenwick_[i]) + delta);
  }
}

std::uint64_t IndexSampler::select(std::uint64_t k) const {
  std::size_t pos = 0;
  for (std::size_t step = top_bit_; step > 0; step /= 2) {
    if (pos + step <= free_.size() && fenwick_[pos + step] <= k) {
      pos += step;
      k -= fenwick_[pos];
    }
  }
  std::uint64_t word = free_[pos];
  for (; k > 0; --k) word &= word - 1;
  return pos * 64 + static_cast<std::uint64_t>(std::countr_zero(word));
}

std::uint64_t IndexSampler::take(Rng& rng) {
  const std::uint64_t index = select(uniform_index(rng, remaining_));
  free_[index / 64] &= ~(std::uint64_t{1} << (index % 64));
  fenwick_add(index / 64, -1);
  --remaining_;
  return index;
}

bool Interleaver::next_is_dummy(Rng& rng) {
  const std::uint64_t total = real_ + dummy_;
  const bool dummy = dummy_ > 0 && bernoulli(rng, static_cast<double>(dummy_) / static_cast<double>(total));
  if (dummy) {
    --dummy_;
  } else {
    --real_;
  }
  return dummy;
}

// ---------------------------------------------------------------------------
// General colorer

namespace {

unsigned step_two_rounds(double epsilon, unsigned K) {
  const double e2 = 2.0 * epsilon;
  const unsigned t = round_count(e2, K);
  if (!(e2 > 0.0 && e2 < 1.0) || t == 0) {
    throw Error(ErrorCode::kInvalidEpsilon, "Step II runs with 2*eps=" + std::to_string(e2) + " and K=" +
                                                std::to_string(K) + ", which gives no rounds");
  }
  return t;
}

}  // namespace

GeneralColorer::GeneralColorer(std::size_t node_count, std::size_t delta, double epsilon, unsigned K, Rng& rng)
    : n_(node_count),
      delta_(delta),
      epsilon_(epsilon),
      K_(K),
      rng_(&rng),
      stage_one_(node_count, delta, epsilon),
      step_two_degree_(node_count, 0),
      step_three_degree_(node_count, 0) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error(ErrorCode::kInvalidEpsilon, "epsilon=" + std::to_string(epsilon) + " outside (0,1)");
  }
  if (delta == 0) throw Error(ErrorCode::kInfeasibleParams, "delta must be >= 1");
  step_two_rounds(epsilon, K);
}

void GeneralColorer::note_color(Color c) {
  count_color(color_count_, metrics_.colors_used, metrics_.max_color, c);
}

void GeneralColorer::start_step_two() {
  metrics_.T = stage_one_.T();
  metrics_.triggered = true;
  metrics_.m_prime = stage_one_.m_prime();
  metrics_.delta1 = stage_one_.max_color();
  metrics_.delta2 = metrics_.delta1;
  const std::uint64_t real = metrics_.m_prime > metrics_.T ? metrics_.m_prime - metrics_.T : 0;

  gadget_ = build_dummy_gadget(stage_one_.degrees(), epsilon_, delta_);
  metrics_.dummy_edges = gadget_.size();
  step_ = 2;
  if (real == 0) {
    start_step_three();
    return;
  }
  const Params hp = make_params(gadget_.total_nodes(), delta_, 2.0 * epsilon_, K_, step_two_rounds(epsilon_, K_));
  metrics_.h_phase1_colors = hp.phase1_colors;
  sampler_.emplace(gadget_.size());
  interleaver_.emplace(real, gadget_.size());
  warmup_.emplace(hp, gadget_.total_nodes(), real + gadget_.size(), *rng_);
}

void GeneralColorer::start_step_three() {
  step_ = 3;
  if (warmup_) {
    metrics_.h_max_tentative_color = warmup_->metrics().max_tentative_color;
    metrics_.h_min_greedy_color = warmup_->metrics().min_greedy_color;
  }
  step_three_ = FirstFitBand(n_, metrics_.delta2);
  metrics_.dummy_edges_fed = sampler_ ? gadget_.size() - sampler_->remaining() : 0;
  sampler_.reset();
  interleaver_.reset();
  warmup_.reset();
}

Color GeneralColorer::push(NodeId u, NodeId v) {
  check_arrival(u, v, n_);
  ++arrivals_;
  Color c = kNoColor;
  switch (step_) {
    case 1:
      c = stage_one_.push(u, v);
      if (stage_one_.triggered()) start_step_two();
      break;
    case 2: {
      while (interleaver_->next_is_dummy(*rng_)) {
        const Endpoints d = gadget_.edge(sampler_->take(*rng_));
        warmup_->push(d.u, d.v);
      }
      c = warmup_->push(u, v) + metrics_.delta1;
      metrics_.delta2 = std::max(metrics_.delta2, c);
      ++step_two_degree_[u];
      ++step_two_degree_[v];
      if (interleaver_->real_left() == 0) start_step_three();
      break;
    }
    default:
      c = step_three_.assign(u, v);
      ++metrics_.step3_edges;
      ++step_three_degree_[u];
      ++step_three_degree_[v];
      break;
  }
  note_color(c);
  if (log_ != nullptr) log_->push_back({arrivals_ - 1, Endpoints::normalized(u, v), c});
  return c;
}

const GeneralMetrics& GeneralColorer::finish() {
  metrics_.arrivals = arrivals_;
  if (step_ == 1) {
    metrics_.T = stage_one_.T();
    metrics_.delta1 = metrics_.delta2 = stage_one_.max_color();
  }
  if (step_ == 2) {
    metrics_.m_prime_exceeds_m = true;
    metrics_.dummy_edges_fed = gadget_.size() - sampler_->remaining();
    metrics_.h_max_tentative_color = warmup_->metrics().max_tentative_color;
    metrics_.h_min_greedy_color = warmup_->metrics().min_greedy_color;
  }
  metrics_.delta3 = std::max(metrics_.delta2, metrics_.max_color);
  for (std::uint32_t d : step_three_degree_) {
    metrics_.step3_max_residual_degree = std::max<std::size_t>(metrics_.step3_max_residual_degree, d);
  }
  return metrics_;
}

std::vector<std::size_t> GeneralColorer::h_degrees() const {
  if (step_ == 1) return {};
  std::vector<std::size_t> out(gadget_.total_nodes());
  for (std::size_t x = 0; x < out.size(); ++x) {
    out[x] = gadget_.dummy_degree(static_cast<NodeId>(x)) + (x < n_ ? step_two_degree_[x] : 0);
  }
  return out;
}

GeneralResult run_general(std::span<const Endpoints> stream, std::size_t n, std::size_t delta, double epsilon,
                          unsigned K, Rng& rng, DecisionLog* log, bool want_h_degrees) {
  GeneralColorer colorer(n, delta, epsilon, K, rng);
  colorer.set_log(log);
  GeneralResult result;
  result.colors.reserve(stream.size());
  result.step_of.reserve(stream.size());
  for (const Endpoints& e : stream) {
    result.step_of.push_back(static_cast<std::uint8_t>(colorer.step()));
    result.colors.push_back(colorer.push(e.u, e.v));
  }
  result.metrics = colorer.finish();
  if (want_h_degrees) result.h_degrees = colorer.h_degrees();
  return result;
}

}  // namespace nibble
