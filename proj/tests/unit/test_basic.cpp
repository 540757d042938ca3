#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "nibble/basic.hpp"
#include "nibble/generators.hpp"
#include "support.hpp"

using namespace nibble;
using nibble::test::make_graph;

namespace {

Graph path3() { return make_graph(4, 2, {{0, 1}, {1, 2}, {2, 3}}); }

}  // namespace

TEST_CASE("sample_round extremes") {
  const Graph g = gen_near_regular(50, 6, 0.0, 3);
  const Params p = make_params(50, 6, 0.1, 1, 4);
  Rng rng(1);

  RoundState none(g, p);
  CHECK(sample_round(none, 0.0, rng).empty());
  CHECK(none.live.size() == g.edge_count());

  RoundState all(g, p);
  CHECK(sample_round(all, 1.0, rng).size() == g.edge_count());
  CHECK(all.live.empty());
}

TEST_CASE("sample_round size is binomial") {
  Graph g(20'000, 1);
  for (NodeId k = 0; k < 10'000; ++k) g.insert_edge(2 * k, 2 * k + 1);
  const Params p = make_params(20'000, 1, 0.2, 1, 4);
  Rng rng(11);
  double total = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    RoundState st(g, p);
    total += static_cast<double>(sample_round(st, 0.2, rng).size());
  }
  CHECK(std::abs(total / 100.0 - 2000.0) <= 3.0 * std::sqrt(1e4 * 0.16));
}

TEST_CASE("palette examples") {
  SUBCASE("round 1 palette is all of [C]") {
    const Graph g = path3();
    const Params p = make_params(4, 2, 0.1, 1, 4);
    const RoundState st(g, p);
    std::vector<Color> full(p.phase1_colors);
    std::iota(full.begin(), full.end(), Color{1});
    for (EdgeId e : g.edge_ids()) CHECK(compute_palette(st, e) == full);
  }
  SUBCASE("set difference") {
    BlockedColors b(3, 3);
    b.block(0, 1);
    b.block(1, 3);
    std::vector<Color> out;
    b.palette(0, 1, out);
    CHECK(out == std::vector<Color>{2});
    CHECK(b.palette_size(0, 1) == 1);
    CHECK(b.palette_element(0, 1, 0) == 2);
    CHECK(b.node_palette_size(0) == 2);
  }
  SUBCASE("covered palette is empty") {
    BlockedColors b(3, 3);
    b.block(0, 1);
    b.block(0, 2);
    b.block(1, 3);
    std::vector<Color> out;
    b.palette(0, 1, out);
    CHECK(out.empty());
    CHECK(b.palette_size(0, 1) == 0);
  }
  SUBCASE("wide palettes agree with a naive set difference") {
    Rng rng(4);
    BlockedColors b(2, 200);
    std::vector<int> blocked(201, 0);
    for (int k = 0; k < 150; ++k) {
      const auto c = static_cast<Color>(1 + uniform_index(rng, 200));
      const auto v = static_cast<NodeId>(uniform_index(rng, 2));
      b.block(v, c);
      blocked[c] = 1;
    }
    std::vector<Color> naive;
    for (Color c = 1; c <= 200; ++c) {
      if (!blocked[c]) naive.push_back(c);
    }
    std::vector<Color> out;
    b.palette(0, 1, out);
    CHECK(out == naive);
    for (std::size_t k = 0; k < naive.size(); ++k) CHECK(b.palette_element(0, 1, k) == naive[k]);
  }
}

TEST_CASE("tentative_color") {
  Rng rng(2);
  CHECK(tentative_color({}, rng) == kNoColor);
  const std::vector<Color> one{5};
  CHECK(tentative_color(one, rng) == 5);

  std::vector<Color> pal(10);
  std::iota(pal.begin(), pal.end(), Color{1});
  std::vector<std::size_t> counts(10, 0);
  const std::size_t draws = 100'000;
  for (std::size_t k = 0; k < draws; ++k) ++counts[tentative_color(pal, rng) - 1];
  for (std::size_t c : counts) CHECK(std::abs(static_cast<double>(c) / draws - 0.1) <= 0.01);
  const std::vector<double> uniform(10, 0.1);
  CHECK(nibble::test::chi2_stat(counts, uniform, draws) < nibble::test::chi2_critical(9, nibble::test::kZ99));
}

TEST_CASE("resolve_failures examples") {
  const Graph g = make_graph(5, 2, {{0, 1}, {1, 2}, {3, 4}});
  const Params p = make_params(5, 2, 0.1, 1, 4);
  const EdgeId a = *g.find_edge(0, 1);
  const EdgeId b = *g.find_edge(1, 2);
  const EdgeId iso = *g.find_edge(3, 4);

  SUBCASE("adjacent equal colors both fail, isolated edge keeps its color") {
    RoundState st(g, p);
    st.sampled = {a, b, iso};
    st.tentative[a] = 2;
    st.tentative[b] = 2;
    st.tentative[iso] = 1;
    const auto failed = resolve_failures(st);
    CHECK(failed.size() == 2);
    CHECK(st.failed[a]);
    CHECK(st.failed[b]);
    CHECK_FALSE(st.failed[iso]);
    CHECK(st.partial.at(iso) == 1);
    CHECK(st.partial.at(a) == kNoColor);
    // failed tentative colors still block
    CHECK(st.blocked.blocked(0, 2));
    CHECK(st.blocked.blocked(2, 2));
    CHECK(st.round == 2);
  }
  SUBCASE("null tentative color fails") {
    RoundState st(g, p);
    st.sampled = {iso};
    st.tentative[iso] = kNoColor;
    const auto failed = resolve_failures(st);
    CHECK(failed == std::vector<EdgeId>{iso});
  }
}

TEST_CASE("phase one on a single edge colors it from [C]") {
  const Graph g = make_graph(2, 1, {{0, 1}});
  const Params p = make_params(2, 1, 1.0, 1, 2);
  Rng rng(3);
  const PhaseOneResult r = run_phase_one(g, p, rng);
  CHECK(r.failed.empty());
  CHECK(r.tail.empty());
  CHECK(r.partial.at(0) >= 1);
  CHECK(r.partial.at(0) <= p.phase1_colors);
}

TEST_CASE("phase one with eps=0 samples nothing") {
  const Graph g = gen_near_regular(40, 5, 0.0, 8);
  const Params p = make_params(40, 5, 0.0, 1, 4);
  Rng rng(3);
  const PhaseOneResult r = run_phase_one(g, p, rng);
  CHECK(r.tail.size() == g.edge_count());
  CHECK(r.failed.empty());
}

TEST_CASE("strict regularity rejects irregular input") {
  const Graph g = make_graph(4, 3, {{0, 1}, {0, 2}, {0, 3}});
  const Params p = make_params(4, 3, 0.1, 1, 3);
  Rng rng(1);
  PhaseOneOptions opt;
  opt.strict_regularity = true;
  try {
    run_phase_one(g, p, rng, opt);
    FAIL("expected DegreeOutOfRange");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDegreeOutOfRange);
  }
}

TEST_CASE("phase two examples") {
  const Color C = 10;
  SUBCASE("path") {
    const Graph g = path3();
    const std::vector<EdgeId> order{*g.find_edge(0, 1), *g.find_edge(1, 2), *g.find_edge(2, 3)};
    const EdgeColoring out = run_phase_two(g, EdgeColoring(g.edge_id_bound()), order, C);
    CHECK(out.at(order[0]) == C + 1);
    CHECK(out.at(order[1]) == C + 2);
    CHECK(out.at(order[2]) == C + 1);
  }
  SUBCASE("nothing to do") {
    const Graph g = path3();
    EdgeColoring partial(g.edge_id_bound());
    partial.set(0, 3);
    const EdgeColoring out = run_phase_two(g, partial, {}, C);
    CHECK(out.at(0) == 3);
    CHECK(out.at(1) == kNoColor);
  }
  SUBCASE("star") {
    const Graph g = make_graph(7, 6, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}, {0, 6}});
    const std::vector<EdgeId> order = g.edge_ids();
    const EdgeColoring out = run_phase_two(g, EdgeColoring(g.edge_id_bound()), order, C);
    std::vector<Color> got;
    for (EdgeId e : order) got.push_back(out.at(e));
    std::sort(got.begin(), got.end());
    CHECK(got == std::vector<Color>{C + 1, C + 2, C + 3, C + 4, C + 5, C + 6});
  }
}

TEST_CASE("basic runs are proper and within the greedy-band bound") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Graph g = gen_near_regular(300, 40, 0.05, seed);
    const Params p = make_params(300, 40, 0.1, 1, 6);
    Rng rng(seed);
    const BasicResult r = run_basic(g, p, rng);
    CHECK(verify_proper_coloring(g, r.coloring, true).valid);
    CHECK(r.metrics.max_color <= p.phase1_colors + 2 * r.metrics.uncolored_max_degree - 1);
    for (EdgeId e : g.edge_ids()) {
      const bool phase_one = r.phase_one.partial.at(e) != kNoColor;
      if (phase_one) {
        CHECK(r.coloring.at(e) <= p.phase1_colors);
      } else {
        CHECK(r.coloring.at(e) > p.phase1_colors);
      }
    }
  }
}

TEST_CASE("same seed gives the same coloring") {
  const Graph g = gen_near_regular(200, 20, 0.0, 5);
  const Params p = make_params(200, 20, 0.1, 1, 6);
  Rng a(9), b(9);
  const BasicResult ra = run_basic(g, p, a);
  const BasicResult rb = run_basic(g, p, b);
  for (EdgeId e : g.edge_ids()) CHECK(ra.coloring.at(e) == rb.coloring.at(e));
}

TEST_CASE("basic beats the greedy worst case at n=2000, delta=500" * doctest::test_suite("monte-carlo")) {
  const std::size_t n = 2000, delta = 500;
  double total = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Graph g = gen_near_regular(n, delta, 0.0, seed);
    const Params p = derive_params(n, delta, 0.05, 1);
    Rng rng(mix_keys(seed, 77));
    const BasicResult r = run_basic(g, p, rng);
    REQUIRE(verify_proper_coloring(g, r.coloring, true).valid);
    total += static_cast<double>(r.metrics.colors_used);
  }
  CHECK(total / 20.0 < 2.0 * delta - 1.0);
}
