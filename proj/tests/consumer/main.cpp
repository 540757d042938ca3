#include <iostream>

#include "nibble/baselines.hpp"
#include "nibble/generators.hpp"

int main() {
  const nibble::Graph g = nibble::gen_near_regular(100, 8, 0.0, 1);
  const auto colors = nibble::greedy_online(nibble::gen_random_order_stream(g, 2), 100);
  const nibble::EdgeColoring c = nibble::coloring_from_stream(g, nibble::gen_random_order_stream(g, 2), colors);
  const bool ok = nibble::verify_proper_coloring(g, c, true).valid;
  std::cout << (ok ? "ok" : "improper") << "\n";
  return ok ? 0 : 1;
}
