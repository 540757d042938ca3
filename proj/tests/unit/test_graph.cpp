#include <sstream>

#include "doctest.h"
#include "nibble/graph.hpp"
#include "nibble/graph_io.hpp"
#include "nibble/random.hpp"
#include "support.hpp"

using namespace nibble;
using nibble::test::make_graph;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::kIo;
}

}  // namespace

TEST_CASE("insert into empty graph") {
  Graph g(4, 3);
  CHECK(g.insert_edge(0, 1) == 0);
  CHECK(g.degree(0) == 1);
  CHECK(g.degree(1) == 1);
  CHECK(g.edge_count() == 1);
}

TEST_CASE("insert errors") {
  Graph g(4, 2);
  g.insert_edge(0, 1);
  CHECK(code_of([&] { g.insert_edge(0, 1); }) == ErrorCode::kDuplicateEdge);
  CHECK(code_of([&] { g.insert_edge(1, 0); }) == ErrorCode::kDuplicateEdge);
  CHECK(code_of([&] { g.insert_edge(3, 3); }) == ErrorCode::kSelfLoop);
  CHECK(code_of([&] { g.insert_edge(0, 9); }) == ErrorCode::kNodeOutOfRange);
  g.insert_edge(0, 2);
  CHECK(code_of([&] { g.insert_edge(0, 3); }) == ErrorCode::kDegreeBoundExceeded);
}

TEST_CASE("unchecked bound lets degrees exceed the declared bound") {
  Graph g(4, 1, Graph::DegreeBound::kUnchecked);
  g.insert_edge(0, 1);
  g.insert_edge(0, 2);
  CHECK(g.degree(0) == 2);
}

TEST_CASE("delete") {
  Graph g(4, 3);
  g.insert_edge(0, 1);
  g.delete_edge(0, 1);
  CHECK(g.edge_count() == 0);
  CHECK(g.degree(0) == 0);
  CHECK(code_of([&] { g.delete_edge(0, 1); }) == ErrorCode::kMissingEdge);

  Graph h(4, 3);
  h.insert_edge(0, 1);
  h.insert_edge(1, 2);
  h.delete_edge(0, 1);
  CHECK(h.degree(1) == 1);
  CHECK(h.has_edge(2, 1));
  CHECK_FALSE(h.has_edge(0, 1));
}

TEST_CASE("edge ids are reused only after deletion") {
  Graph g(5, 4);
  const EdgeId a = g.insert_edge(0, 1);
  const EdgeId b = g.insert_edge(1, 2);
  CHECK(a != b);
  g.delete_edge(0, 1);
  CHECK_FALSE(g.is_live(a));
  const EdgeId c = g.insert_edge(3, 4);
  CHECK(g.is_live(c));
  CHECK(g.endpoints(c) == Endpoints{3, 4});
  CHECK(g.edge_ids().size() == 2);
}

TEST_CASE("random insert/delete sequence keeps degrees consistent") {
  Rng rng(5);
  Graph g(30, 6);
  std::vector<std::vector<int>> adj(30, std::vector<int>(30, 0));
  for (int step = 0; step < 5000; ++step) {
    const auto u = static_cast<NodeId>(uniform_index(rng, 30));
    const auto v = static_cast<NodeId>(uniform_index(rng, 30));
    if (u == v) continue;
    if (adj[u][v]) {
      g.delete_edge(u, v);
      adj[u][v] = adj[v][u] = 0;
    } else if (g.degree(u) < 6 && g.degree(v) < 6) {
      g.insert_edge(u, v);
      adj[u][v] = adj[v][u] = 1;
    }
  }
  std::size_t edges = 0;
  for (NodeId u = 0; u < 30; ++u) {
    std::size_t d = 0;
    for (NodeId v = 0; v < 30; ++v) {
      d += adj[u][v];
      CHECK(g.has_edge(u, v) == (adj[u][v] != 0));
    }
    CHECK(g.degree(u) == d);
    edges += d;
  }
  CHECK(g.edge_count() == edges / 2);
}

TEST_CASE("verify_proper_coloring") {
  const Graph tri = make_graph(3, 2, {{0, 1}, {1, 2}, {0, 2}});
  EdgeColoring ok(3);
  ok.set(0, 1);
  ok.set(1, 2);
  ok.set(2, 3);
  CHECK(verify_proper_coloring(tri, ok, true).valid);

  EdgeColoring bad(3);
  bad.set(0, 1);
  bad.set(1, 1);
  bad.set(2, 2);
  const ColoringReport rep = verify_proper_coloring(tri, bad, true);
  CHECK_FALSE(rep.valid);
  REQUIRE(rep.first_conflict.has_value());
  const auto [x, y] = *rep.first_conflict;
  CHECK(bad.at(x) == 1);
  CHECK(bad.at(y) == 1);

  const Graph path = make_graph(3, 2, {{0, 1}, {1, 2}});
  EdgeColoring partial(2);
  partial.set(0, 1);
  const ColoringReport p = verify_proper_coloring(path, partial, true);
  CHECK_FALSE(p.valid);
  CHECK(p.uncolored_count == 1);
  CHECK(verify_proper_coloring(path, partial, false).valid);
}

TEST_CASE("max_degree") {
  CHECK(max_degree(Graph(5, 3)) == 0);
  CHECK(max_degree(make_graph(6, 5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}})) == 5);
  CHECK(max_degree(make_graph(3, 2, {{0, 1}, {1, 2}, {0, 2}})) == 2);
}

TEST_CASE("edge list round trip") {
  const std::vector<Endpoints> edges{{0, 1}, {2, 3}, {1, 2}};
  std::stringstream buf;
  write_edge_list(buf, {4, 2}, edges);
  const EdgeListFile back = read_edge_list(buf);
  CHECK(back.header.node_count == 4);
  CHECK(back.header.max_degree == 2);
  CHECK(back.edges == edges);
}

TEST_CASE("update stream round trip") {
  const UpdateStream ups{{UpdateOp::kInsert, 0, 1}, {UpdateOp::kDelete, 0, 1}, {UpdateOp::kInsert, 2, 3}};
  std::stringstream buf;
  write_update_stream(buf, {4, 2}, ups);
  const UpdateStreamFile back = read_update_stream(buf);
  CHECK(back.updates == ups);
}

TEST_CASE("malformed edge list is an IO error") {
  std::stringstream buf("# n=3 delta=2\n0 x\n");
  CHECK(code_of([&] { read_edge_list(buf); }) == ErrorCode::kIo);
}

TEST_CASE("coloring_from_stream maps arrivals onto edge ids") {
  const std::vector<Endpoints> stream{{1, 2}, {0, 1}};
  const Graph g = graph_from_edges(3, 2, stream);
  const std::vector<Color> colors{5, 7};
  const EdgeColoring c = coloring_from_stream(g, stream, colors);
  CHECK(c.at(*g.find_edge(1, 2)) == 5);
  CHECK(c.at(*g.find_edge(0, 1)) == 7);
}
