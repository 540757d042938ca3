#include <array>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "nibble/dynamic.hpp"
#include "nibble/generators.hpp"
#include "support.hpp"

using namespace nibble;

namespace {

UpdateReport insert(DynamicColorer& dc, NodeId u, NodeId v) { return dc.apply({UpdateOp::kInsert, u, v}); }
UpdateReport erase(DynamicColorer& dc, NodeId u, NodeId v) { return dc.apply({UpdateOp::kDelete, u, v}); }

// Frequencies of tentatively_color's output over `trials` draws.
std::array<double, 3> outcome_freq(Color prev, std::vector<Color> p_prev, std::vector<Color> p_now,
                                   std::size_t trials, std::uint64_t seed) {
  Rng rng(seed);
  std::array<std::size_t, 3> counts{};
  for (std::size_t k = 0; k < trials; ++k) ++counts[tentatively_color(prev, p_prev, p_now, rng)];
  return {static_cast<double>(counts[0]) / trials, static_cast<double>(counts[1]) / trials,
          static_cast<double>(counts[2]) / trials};
}

}  // namespace

TEST_CASE("capped geometric") {
  for (double u : {0.0, 0.3, 0.999}) CHECK(capped_geometric(u, 0.2, 1) == 1);
  CHECK(capped_geometric(0.0, 0.5, 3) == 1);
  CHECK(capped_geometric(0.49, 0.5, 3) == 1);
  CHECK(capped_geometric(0.51, 0.5, 3) == 2);
  CHECK(capped_geometric(0.76, 0.5, 3) == 3);
  CHECK(capped_geometric(0.999999, 0.5, 3) == 3);

  RoundAssignment ra(5, 0.5, 3);
  std::array<std::size_t, 4> counts{};
  const std::size_t pairs = 100'000;
  for (std::size_t k = 0; k < pairs; ++k) {
    ++counts[ra.round(static_cast<NodeId>(k), static_cast<NodeId>(k + 1'000'000))];
  }
  CHECK(std::abs(counts[1] / double(pairs) - 0.5) <= 0.01);
  CHECK(std::abs(counts[2] / double(pairs) - 0.25) <= 0.01);
  CHECK(std::abs(counts[3] / double(pairs) - 0.25) <= 0.01);
}

TEST_CASE("round assignment is stable per pair") {
  RoundAssignment ra(9, 0.3, 6);
  for (NodeId u = 0; u < 50; ++u) {
    CHECK(ra.round(u, u + 7) == ra.round(u, u + 7));
    CHECK(ra.round(u, u + 7) == ra.round(u + 7, u));
  }
  ra.set_override(1, 2, 4);
  CHECK(ra.round(2, 1) == 4);
  CHECK(RoundAssignment(9, 0.3, 1).round(3, 4) == 1);
}

TEST_CASE("tentatively_color cases") {
  const std::size_t trials = 100'000;
  SUBCASE("previous color left the palette: forced redraw") {
    const auto f = outcome_freq(1, {1, 2}, {2}, trials, 1);
    CHECK(f[2] == 1.0);
  }
  SUBCASE("unchanged palette keeps the color") {
    const auto f = outcome_freq(1, {1, 2}, {1, 2}, trials, 2);
    CHECK(f[1] == 1.0);
  }
  SUBCASE("palette grew by one color") {
    const auto f = outcome_freq(1, {1}, {1, 2}, trials, 3);
    CHECK(std::abs(f[1] - 0.5) <= 0.01);
    CHECK(std::abs(f[2] - 0.5) <= 0.01);
  }
  SUBCASE("empty palettes") {
    Rng rng(4);
    CHECK(tentatively_color(kNoColor, std::vector<Color>{}, std::vector<Color>{}, rng) == kNoColor);
    CHECK(tentatively_color(1, std::vector<Color>{1}, std::vector<Color>{}, rng) == kNoColor);
  }
}

TEST_CASE("regularizing gadget") {
  const std::size_t delta = 4;
  const Params p = make_params(3, delta, 0.2, 1, 3);
  DynamicColorer dc(3, p, 1);
  RegularizingGadget gadget(3, delta);
  const Graph& g = dc.graph();
  for (NodeId v = 0; v < 3; ++v) CHECK(g.degree(v) == delta);

  const auto ins = gadget.wrap({UpdateOp::kInsert, 0, 1});
  REQUIRE(ins.size() == 3);
  CHECK(ins[0] == Update{UpdateOp::kInsert, 0, 1});
  CHECK(ins[1] == Update{UpdateOp::kDelete, 0, gadget.dummy(0, 0)});
  CHECK(ins[2] == Update{UpdateOp::kDelete, 1, gadget.dummy(1, 0)});

  insert(dc, 0, 1);
  CHECK(g.degree(0) == delta);
  CHECK(g.degree(1) == delta);
  CHECK(g.degree(gadget.dummy(0, 0)) == delta - 1);
  CHECK(g.degree(gadget.dummy(1, 0)) == delta - 1);

  const auto del = gadget.wrap({UpdateOp::kDelete, 0, 1});
  CHECK(del[0] == Update{UpdateOp::kDelete, 0, 1});
  CHECK(del[1] == Update{UpdateOp::kInsert, 0, gadget.dummy(0, 0)});
  CHECK(del[2] == Update{UpdateOp::kInsert, 1, gadget.dummy(1, 0)});

  erase(dc, 0, 1);
  for (NodeId x = 0; x < g.node_count(); ++x) CHECK(g.degree(x) == delta);
}

TEST_CASE("gadget exhaustion") {
  RegularizingGadget gadget(6, 2);
  gadget.wrap({UpdateOp::kInsert, 0, 1});
  gadget.wrap({UpdateOp::kInsert, 0, 2});
  try {
    gadget.wrap({UpdateOp::kInsert, 0, 3});
    FAIL("expected GadgetExhausted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kGadgetExhausted);
  }
}

TEST_CASE("SimpleColor") {
  SimpleColor sc(6, 10);
  CHECK(sc.insert(0, 1) == 11);
  CHECK(sc.insert(1, 2) == 12);
  CHECK(sc.insert(1, 3) == 13);
  sc.erase(1, 3, 13);
  CHECK(sc.insert(1, 3) == 13);
  CHECK(sc.insert(4, 5) == 11);
  sc.erase(4, 5, 11);
  CHECK(sc.insert(4, 5) == 11);
  CHECK(sc.events() == 8);
}

TEST_CASE("round-t insertion into an empty neighborhood has no recourse") {
  const Params p = make_params(10, 3, 0.2, 1, 3);
  DynamicOptions opt;
  opt.gadget = false;
  opt.round_overrides[Endpoints::normalized(0, 1).key()] = 1;
  opt.round_overrides[Endpoints::normalized(2, 3).key()] = 3;
  DynamicColorer dc(10, p, 4, opt);
  insert(dc, 0, 1);
  const UpdateReport r = insert(dc, 2, 3);
  CHECK(r.recourse == 0);
  const EdgeId e = *dc.graph().find_edge(2, 3);
  CHECK(dc.round_of(e) == 3);
  CHECK(dc.tentative(e) == kNoColor);
  CHECK(dc.final_color(e) == p.phase1_colors + 1);
}

TEST_CASE("deletion without palette effects has no recourse") {
  const Params p = make_params(10, 3, 0.2, 1, 3);
  DynamicOptions opt;
  opt.gadget = false;
  DynamicColorer dc(10, p, 5, opt);
  insert(dc, 0, 1);
  insert(dc, 2, 3);
  insert(dc, 4, 5);
  const UpdateReport r = erase(dc, 2, 3);
  CHECK(r.recourse == 0);
  for (std::size_t d : r.dirty_per_round) CHECK(d == 0);
}

TEST_CASE("matching updates leave every dirty set empty") {
  const Params p = make_params(40, 2, 0.3, 1, 4);
  DynamicOptions opt;
  opt.gadget = false;
  DynamicColorer dc(40, p, 6, opt);
  for (NodeId k = 0; k < 20; ++k) {
    const UpdateReport r = insert(dc, 2 * k, 2 * k + 1);
    CHECK(r.recourse == 0);
    for (std::size_t d : r.dirty_per_round) CHECK(d == 0);
  }
}

TEST_CASE("dependency cone and full sweep agree") {
  const std::size_t n = 60, delta = 6;
  const Params p = make_params(n, delta, 0.2, 1, 4);
  const UpdateStream ups = gen_update_sequence(n, delta, 400, 0.5, 12);
  for (bool gadget : {false, true}) {
    DynamicOptions cone_opt, sweep_opt;
    cone_opt.gadget = sweep_opt.gadget = gadget;
    sweep_opt.full_sweep = true;
    DynamicColorer cone(n, p, 21, cone_opt);
    DynamicColorer sweep(n, p, 21, sweep_opt);
    for (const Update& up : ups) {
      const UpdateReport a = cone.apply(up);
      const UpdateReport b = sweep.apply(up);
      CHECK(a.recourse == b.recourse);
      CHECK(a.dirty_per_round == b.dirty_per_round);
    }
    const Graph& g = cone.graph();
    REQUIRE(g.edge_count() == sweep.graph().edge_count());
    for (EdgeId e : g.edge_ids()) {
      const Endpoints ends = g.endpoints(e);
      const EdgeId f = *sweep.graph().find_edge(ends.u, ends.v);
      CHECK(cone.final_color(e) == sweep.final_color(f));
      CHECK(cone.tentative(e) == sweep.tentative(f));
    }
  }
}

TEST_CASE("dynamic coloring stays proper and banded after every update") {
  const std::size_t n = 100, delta = 10;
  const Params p = make_params(n, delta, 0.2, 1, 5);
  const UpdateStream ups = gen_update_sequence(n, delta, 1000, 0.5, 3);
  DynamicOptions opt;
  opt.check_every_update = true;
  DynamicColorer dc(n, p, 8, opt);
  std::vector<UpdateReport> log;
  for (const Update& up : ups) {
    log.push_back(dc.apply(up));
    REQUIRE(dc.verify().valid);
    REQUIRE(dc.band_discipline_ok());
    CHECK(log.back().bound_holds);
  }
  const RecourseStats s = recourse_stats(log);
  CHECK(s.updates == ups.size());
  CHECK(std::accumulate(s.histogram.begin(), s.histogram.end(), std::size_t{0}) == ups.size());
  CHECK(s.bound_violations == 0);
  const DirtyStats d = dirty_stats(dc.sub_log());
  CHECK(d.samples == 3 * ups.size());
  CHECK(d.mean.size() == p.t_eps - 1);
}

TEST_CASE("dynamic runs are reproducible") {
  const Params p = make_params(50, 5, 0.2, 1, 4);
  const UpdateStream ups = gen_update_sequence(50, 5, 300, 0.5, 4);
  DynamicColorer a(50, p, 77), b(50, p, 77);
  for (const Update& up : ups) CHECK(a.apply(up).recourse == b.apply(up).recourse);
  const EdgeColoring ca = a.coloring(), cb = b.coloring();
  for (EdgeId e : a.graph().edge_ids()) CHECK(ca.at(e) == cb.at(e));
}

TEST_CASE("dynamic update errors") {
  const Params p = make_params(5, 2, 0.2, 1, 3);
  DynamicOptions opt;
  opt.gadget = false;
  DynamicColorer dc(5, p, 1, opt);
  insert(dc, 0, 1);
  auto code = [&](Update up) {
    try {
      dc.apply(up);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIo;
  };
  CHECK(code({UpdateOp::kInsert, 0, 1}) == ErrorCode::kDuplicateEdge);
  CHECK(code({UpdateOp::kDelete, 2, 3}) == ErrorCode::kMissingEdge);
  CHECK(code({UpdateOp::kInsert, 2, 2}) == ErrorCode::kSelfLoop);
  CHECK(code({UpdateOp::kInsert, 2, 9}) == ErrorCode::kNodeOutOfRange);
}
