#include "nibble/equivalence.hpp"

#include <algorithm>
#include <set>

#include "nibble/dynamic.hpp"
#include "nibble/params.hpp"
#include "nibble/random.hpp"

namespace nibble {
namespace {

struct Static {
  std::vector<Endpoints> edges;
  std::vector<unsigned> round;
  std::vector<std::size_t> order;  // rounds < t, by round
  unsigned t = 1;
  Color C = 0;
};

Static prepare(const ScriptedScenario& s) {
  Static st;
  for (const auto& [e, r] : final_edges(s)) {
    st.edges.push_back(e);
    st.round.push_back(r);
  }
  st.t = s.t_eps;
  st.C = phase_one_color_count(s.delta, s.epsilon);
  for (std::size_t k = 0; k < st.edges.size(); ++k) {
    if (st.round[k] < st.t) st.order.push_back(k);
  }
  std::stable_sort(st.order.begin(), st.order.end(),
                   [&](std::size_t a, std::size_t b) { return st.round[a] < st.round[b]; });
  return st;
}

bool adjacent(const Endpoints& a, const Endpoints& b) { return a.touches(b.u) || a.touches(b.v); }

std::vector<Color> palette(const Static& st, const std::vector<Color>& tent, std::size_t k) {
  std::vector<Color> p;
  for (Color c = 1; c <= st.C; ++c) {
    bool free = true;
    for (std::size_t j = 0; j < st.edges.size() && free; ++j) {
      if (j != k && st.round[j] < st.round[k] && tent[j] == c && adjacent(st.edges[j], st.edges[k])) free = false;
    }
    if (free) p.push_back(c);
  }
  return p;
}

Outcome encode(const Static& st, const std::vector<Color>& tent) {
  Outcome out(st.edges.size(), 0);
  for (std::size_t k = 0; k < st.edges.size(); ++k) {
    if (st.round[k] >= st.t) continue;
    bool failed = tent[k] == kNoColor;
    for (std::size_t j = 0; j < st.edges.size() && !failed; ++j) {
      if (j != k && st.round[j] == st.round[k] && tent[j] == tent[k] && adjacent(st.edges[j], st.edges[k])) {
        failed = true;
      }
    }
    out[k] = 2 * tent[k] + (failed ? 1U : 0U);
  }
  return out;
}

void enumerate(const Static& st, std::size_t pos, std::vector<Color>& tent, double p, Pmf& out,
               std::size_t& leaves, std::size_t max_outcomes) {
  if (pos == st.order.size()) {
    if (++leaves > max_outcomes) throw Error(ErrorCode::kResourceLimit, "enumeration exceeds the outcome cap");
    out[encode(st, tent)] += p;
    return;
  }
  const std::size_t k = st.order[pos];
  const std::vector<Color> pal = palette(st, tent, k);
  if (pal.empty()) {
    tent[k] = kNoColor;
    enumerate(st, pos + 1, tent, p, out, leaves, max_outcomes);
    return;
  }
  for (Color c : pal) {
    tent[k] = c;
    enumerate(st, pos + 1, tent, p / static_cast<double>(pal.size()), out, leaves, max_outcomes);
  }
  tent[k] = kNoColor;
}

}  // namespace

ScriptedScenario toy_scenario() {
  ScriptedScenario s;
  s.n = 5;
  s.delta = 3;
  s.epsilon = 0.3;
  s.K = 1;
  s.t_eps = 3;
  using enum UpdateOp;
  s.updates = {{kInsert, 0, 1}, {kInsert, 1, 2}, {kInsert, 2, 3}, {kInsert, 3, 4},
               {kInsert, 0, 4}, {kInsert, 1, 3}, {kDelete, 1, 2}, {kInsert, 0, 2}};
  s.rounds = {{{0, 1}, 1}, {{1, 2}, 1}, {{2, 3}, 3}, {{3, 4}, 2},
              {{0, 4}, 1}, {{1, 3}, 2}, {{0, 2}, 2}};
  return s;
}

std::vector<std::pair<Endpoints, unsigned>> final_edges(const ScriptedScenario& s) {
  std::set<std::uint64_t> present;
  for (const Update& up : s.updates) {
    const std::uint64_t key = Endpoints::normalized(up.u, up.v).key();
    if (up.op == UpdateOp::kInsert) {
      present.insert(key);
    } else {
      present.erase(key);
    }
  }
  std::vector<std::pair<Endpoints, unsigned>> out;
  for (std::uint64_t key : present) {
    const Endpoints e{static_cast<NodeId>(key >> 32), static_cast<NodeId>(key & 0xffffffffU)};
    const auto it = std::find_if(s.rounds.begin(), s.rounds.end(), [&](const auto& r) {
      return Endpoints::normalized(r.first.u, r.first.v) == e;
    });
    if (it == s.rounds.end()) throw Error(ErrorCode::kConfig, "scenario has no round for an edge");
    out.emplace_back(e, it->second);
  }
  return out;
}

Pmf exact_static_pmf(const ScriptedScenario& s, std::size_t max_outcomes) {
  const Static st = prepare(s);
  std::vector<Color> tent(st.edges.size(), kNoColor);
  Pmf out;
  std::size_t leaves = 0;
  enumerate(st, 0, tent, 1.0, out, leaves, max_outcomes);
  return out;
}

std::vector<Outcome> sample_static(const ScriptedScenario& s, std::size_t trials, std::uint64_t seed) {
  const Static st = prepare(s);
  Rng rng(seed);
  std::vector<Outcome> out;
  out.reserve(trials);
  std::vector<Color> tent(st.edges.size());
  for (std::size_t trial = 0; trial < trials; ++trial) {
    std::fill(tent.begin(), tent.end(), kNoColor);
    for (std::size_t k : st.order) {
      const std::vector<Color> pal = palette(st, tent, k);
      tent[k] = pal.empty() ? kNoColor : pal[uniform_index(rng, pal.size())];
    }
    out.push_back(encode(st, tent));
  }
  return out;
}

std::vector<Outcome> sample_dynamic(const ScriptedScenario& s, std::size_t trials, std::uint64_t seed) {
  const Params params = make_params(s.n, s.delta, s.epsilon, s.K, s.t_eps);
  DynamicOptions options;
  options.gadget = false;
  for (const auto& [e, r] : s.rounds) options.round_overrides[Endpoints::normalized(e.u, e.v).key()] = r;
  const auto edges = final_edges(s);
  std::vector<Outcome> out;
  out.reserve(trials);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    DynamicColorer dc(s.n, params, mix_keys(seed, trial), options);
    for (const Update& up : s.updates) dc.apply(up);
    Outcome o(edges.size(), 0);
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const EdgeId e = *dc.graph().find_edge(edges[k].first.u, edges[k].first.v);
      if (dc.round_of(e) >= s.t_eps) continue;
      o[k] = 2 * dc.tentative(e) + (dc.failed(e) ? 1U : 0U);
    }
    out.push_back(std::move(o));
  }
  return out;
}

EquivalenceReport compare_dynamic_static(const ScriptedScenario& s, std::size_t trials, std::uint64_t seed) {
  const std::vector<Outcome> dyn = sample_dynamic(s, trials, mix_keys(seed, 1));
  const std::vector<Outcome> sta = sample_static(s, trials, mix_keys(seed, 2));
  const Pmf exact = exact_static_pmf(s);
  EquivalenceReport rep;
  rep.edges = final_edges(s).size();
  for (std::size_t k = 0; k < rep.edges; ++k) {
    const auto dk = marginal(dyn, k);
    const auto sk = marginal(sta, k);
    rep.edge_tv_dynamic_static.push_back(tv_distance(dk, sk).tv);
    rep.edge_tv_dynamic_exact.push_back(tv_distance(dk, marginal(exact, k)).tv);
    rep.max_edge_tv = std::max({rep.max_edge_tv, rep.edge_tv_dynamic_static.back(), rep.edge_tv_dynamic_exact.back()});
  }
  rep.joint_tv_dynamic_static = tv_distance(dyn, sta).tv;
  rep.joint_tv_dynamic_exact = tv_distance(dyn, exact).tv;
  rep.joint_tv_static_exact = tv_distance(sta, exact).tv;
  return rep;
}

}  // namespace nibble
