#include "nibble/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "nibble/random.hpp"

namespace nibble {
namespace {

constexpr int kPairingRetries = 100;

std::uint64_t pair_key(NodeId a, NodeId b) { return Endpoints::normalized(a, b).key(); }

std::vector<std::uint32_t> draw_targets(std::size_t n, std::size_t delta, double slack, Rng& rng) {
  const double raw_lo = std::ceil(static_cast<double>(delta) * (1.0 - slack) - 1e-9);
  const auto lo = static_cast<std::uint32_t>(std::clamp(raw_lo, 0.0, static_cast<double>(delta)));
  const auto hi = static_cast<std::uint32_t>(delta);
  std::vector<std::uint32_t> target(n);
  std::uint64_t sum = 0;
  for (auto& d : target) {
    d = static_cast<std::uint32_t>(lo + uniform_index(rng, hi - lo + 1));
    sum += d;
  }
  if (sum % 2 != 0) {
    auto fix = std::find_if(target.begin(), target.end(), [&](std::uint32_t d) { return d > lo; });
    if (fix != target.end()) {
      --*fix;
    } else {
      fix = std::find_if(target.begin(), target.end(), [&](std::uint32_t d) { return d < hi; });
      if (fix == target.end()) {
        throw Error(ErrorCode::kInfeasibleParams, "n*delta is odd and slack leaves no room: n=" +
                                                      std::to_string(n) + " delta=" + std::to_string(delta));
      }
      ++*fix;
    }
  }
  return target;
}

// Pairs consecutive stubs; false on the first loop or repeated pair.
bool pair_stubs(const std::vector<NodeId>& stubs, std::unordered_set<std::uint64_t>& seen) {
  seen.clear();
  for (std::size_t k = 0; k + 1 < stubs.size(); k += 2) {
    if (stubs[k] == stubs[k + 1] || !seen.insert(pair_key(stubs[k], stubs[k + 1])).second) return false;
  }
  return true;
}

// Degree-preserving double-edge swaps until the pairing is simple.
void repair_pairing(std::vector<NodeId>& stubs, Rng& rng) {
  const std::size_t pairs = stubs.size() / 2;
  std::unordered_map<std::uint64_t, std::uint32_t> count;
  count.reserve(pairs * 2);
  for (std::size_t k = 0; k < pairs; ++k) ++count[pair_key(stubs[2 * k], stubs[2 * k + 1])];
  auto bad = [&](std::size_t k) {
    const NodeId a = stubs[2 * k];
    const NodeId b = stubs[2 * k + 1];
    return a == b || count[pair_key(a, b)] > 1;
  };
  auto drop = [&](NodeId a, NodeId b) {
    auto it = count.find(pair_key(a, b));
    if (--it->second == 0) count.erase(it);
  };
  std::vector<std::size_t> queue;
  for (std::size_t k = 0; k < pairs; ++k) {
    if (bad(k)) queue.push_back(k);
  }
  std::size_t attempts = 0;
  const std::size_t max_attempts = 1000 * (pairs + 10);
  while (!queue.empty()) {
    const std::size_t i = queue.back();
    if (!bad(i)) {
      queue.pop_back();
      continue;
    }
    if (++attempts > max_attempts) {
      throw Error(ErrorCode::kInfeasibleParams, "could not repair the stub pairing into a simple graph");
    }
    const std::size_t j = uniform_index(rng, pairs);
    if (j == i) continue;
    NodeId a = stubs[2 * i], b = stubs[2 * i + 1], c = stubs[2 * j], d = stubs[2 * j + 1];
    if (bernoulli(rng, 0.5)) std::swap(c, d);
    // rewire (a,b),(c,d) -> (a,c),(b,d)
    if (a == c || b == d) continue;
    if (count.count(pair_key(a, c)) != 0 || count.count(pair_key(b, d)) != 0) continue;
    if (pair_key(a, c) == pair_key(b, d)) continue;
    drop(a, b);
    drop(c, d);
    ++count[pair_key(a, c)];
    ++count[pair_key(b, d)];
    stubs[2 * i] = a;
    stubs[2 * i + 1] = c;
    stubs[2 * j] = b;
    stubs[2 * j + 1] = d;
  }
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw Error(ErrorCode::kResourceLimit, "beta overflows 64 bits");
  return out;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // r * (n - k + i) is divisible by i; divide first by the gcd to delay overflow.
    const std::uint64_t num = n - k + i;
    const std::uint64_t g = std::gcd(r, i);
    r = checked_mul(r / g, num / (i / g));
  }
  return r;
}

}  // namespace

Graph gen_near_regular(std::size_t n, std::size_t delta, double slack, std::uint64_t seed) {
  if (delta > 0 && n <= delta) {
    throw Error(ErrorCode::kInfeasibleParams,
                "need n > delta, got n=" + std::to_string(n) + " delta=" + std::to_string(delta));
  }
  if (slack < 0.0) throw Error(ErrorCode::kInfeasibleParams, "slack must be >= 0");
  Rng rng(seed);
  Graph g(n, delta);
  if (delta == 0) return g;

  const std::vector<std::uint32_t> target = draw_targets(n, delta, slack, rng);
  std::vector<NodeId> stubs;
  for (NodeId v = 0; v < n; ++v) stubs.insert(stubs.end(), target[v], v);

  std::unordered_set<std::uint64_t> seen;
  seen.reserve(stubs.size());
  bool simple = false;
  for (int attempt = 0; attempt < kPairingRetries && !simple; ++attempt) {
    std::shuffle(stubs.begin(), stubs.end(), rng);
    simple = pair_stubs(stubs, seen);
  }
  if (!simple) repair_pairing(stubs, rng);
  for (std::size_t k = 0; k + 1 < stubs.size(); k += 2) g.insert_edge(stubs[k], stubs[k + 1]);
  return g;
}

EdgeStream gen_random_order_stream(const Graph& g, std::uint64_t seed) {
  EdgeStream stream;
  stream.reserve(g.edge_count());
  for (EdgeId e : g.edge_ids()) stream.push_back(g.endpoints(e));
  Rng rng(seed);
  std::shuffle(stream.begin(), stream.end(), rng);
  return stream;
}

UpdateStream gen_update_sequence(std::size_t n, std::size_t delta, std::size_t length, double churn,
                                 std::uint64_t seed) {
  if (!(churn >= 0.0 && churn <= 1.0)) throw Error(ErrorCode::kInfeasibleParams, "churn must lie in [0,1]");
  Rng rng(seed);
  Graph g(n, delta);
  std::vector<Endpoints> present;
  std::unordered_map<std::uint64_t, std::size_t> position;
  UpdateStream out;
  out.reserve(length);

  auto try_insert = [&]() -> bool {
    if (n < 2) return false;
    for (int attempt = 0; attempt < 100; ++attempt) {
      const auto a = static_cast<NodeId>(uniform_index(rng, n));
      const auto b = static_cast<NodeId>(uniform_index(rng, n));
      if (a == b || g.degree(a) >= delta || g.degree(b) >= delta || g.has_edge(a, b)) continue;
      g.insert_edge(a, b);
      position[pair_key(a, b)] = present.size();
      present.push_back(Endpoints::normalized(a, b));
      out.push_back({UpdateOp::kInsert, a, b});
      return true;
    }
    // Rejection failed; scan the unsaturated nodes for any addable pair.
    std::vector<NodeId> open;
    for (NodeId v = 0; v < n; ++v) {
      if (g.degree(v) < delta) open.push_back(v);
    }
    std::shuffle(open.begin(), open.end(), rng);
    for (std::size_t i = 0; i < open.size(); ++i) {
      for (std::size_t j = i + 1; j < open.size(); ++j) {
        if (g.has_edge(open[i], open[j])) continue;
        g.insert_edge(open[i], open[j]);
        position[pair_key(open[i], open[j])] = present.size();
        present.push_back(Endpoints::normalized(open[i], open[j]));
        out.push_back({UpdateOp::kInsert, open[i], open[j]});
        return true;
      }
    }
    return false;
  };
  auto remove_random = [&]() {
    const std::size_t k = uniform_index(rng, present.size());
    const Endpoints e = present[k];
    g.delete_edge(e.u, e.v);
    position.erase(e.key());
    if (k + 1 != present.size()) {
      present[k] = present.back();
      position[present[k].key()] = k;
    }
    present.pop_back();
    out.push_back({UpdateOp::kDelete, e.u, e.v});
  };

  const std::size_t warmup = length / 2;
  while (out.size() < length) {
    const bool warm = out.size() < warmup;
    const bool want_delete = !warm && bernoulli(rng, churn);
    if (want_delete && !present.empty()) {
      remove_random();
      continue;
    }
    if (try_insert()) continue;
    if (churn == 0.0 || present.empty()) break;  // caps bind
    remove_random();
  }
  return out;
}

std::uint64_t lower_bound_beta(std::size_t delta) {
  if (delta < 2) throw Error(ErrorCode::kInfeasibleParams, "lower-bound instance needs delta >= 2");
  const std::uint64_t d = delta;
  return checked_mul(checked_mul(2 * d, binomial(2 * d - 2, d - 1)), binomial(2 * d - 1, d));
}

LowerBoundInstance gen_lower_bound_instance(const LowerBoundParams& params) {
  const std::size_t delta = params.delta;
  LowerBoundInstance out;
  out.beta = lower_bound_beta(delta);
  const std::uint64_t per_copy = checked_mul(out.beta, delta) + 1;
  if (params.copies == 0) {
    out.copies = static_cast<std::size_t>(params.node_budget / per_copy);
    if (out.copies == 0) {
      throw Error(ErrorCode::kResourceLimit, "one copy needs " + std::to_string(per_copy) +
                                                 " nodes, budget is " + std::to_string(params.node_budget));
    }
  } else {
    out.copies = params.copies;
    if (checked_mul(per_copy, out.copies) > params.node_budget) {
      throw Error(ErrorCode::kResourceLimit, std::to_string(out.copies) + " copies need " +
                                                 std::to_string(per_copy * out.copies) + " nodes, budget is " +
                                                 std::to_string(params.node_budget));
    }
  }

  Rng rng(params.seed);
  const std::size_t n = static_cast<std::size_t>(per_copy) * out.copies;
  out.graph = Graph(n, delta);
  std::vector<std::uint64_t> centers(out.beta);
  for (std::size_t k = 0; k < out.copies; ++k) {
    const auto base = static_cast<NodeId>(k * per_copy);
    const NodeId hub = base;
    out.hubs.push_back(hub);
    for (std::uint64_t s = 0; s < out.beta; ++s) {
      const auto center = static_cast<NodeId>(base + 1 + s * delta);
      for (std::size_t leaf = 1; leaf < delta; ++leaf) {
        out.graph.insert_edge(center, static_cast<NodeId>(center + leaf));
      }
    }
    // Δ distinct centers: partial Fisher-Yates over star indices.
    std::iota(centers.begin(), centers.end(), std::uint64_t{0});
    for (std::size_t j = 0; j < delta; ++j) {
      const std::size_t pick = j + uniform_index(rng, centers.size() - j);
      std::swap(centers[j], centers[pick]);
      out.graph.insert_edge(hub, static_cast<NodeId>(base + 1 + centers[j] * delta));
    }
  }
  out.stream.reserve(out.graph.edge_count());
  for (EdgeId e : out.graph.edge_ids()) out.stream.push_back(out.graph.endpoints(e));
  std::shuffle(out.stream.begin(), out.stream.end(), rng);
  return out;
}

}  // namespace nibble
