#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "nibble/graph.hpp"

namespace nibble::test {

inline Graph make_graph(std::size_t n, std::size_t bound, std::initializer_list<Endpoints> edges) {
  Graph g(n, bound);
  for (const Endpoints& e : edges) g.insert_edge(e.u, e.v);
  return g;
}

/// Upper alpha-quantile of chi-square with k degrees of freedom
/// (Wilson-Hilferty). z is the matching standard normal quantile.
inline double chi2_critical(std::size_t k, double z) {
  const double d = static_cast<double>(k);
  const double h = 2.0 / (9.0 * d);
  return d * std::pow(1.0 - h + z * std::sqrt(h), 3.0);
}

inline constexpr double kZ99 = 2.3263478740408408;  // alpha = 0.01

inline double chi2_stat(std::span<const std::size_t> observed, std::span<const double> expected_p, std::size_t total) {
  double stat = 0.0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    const double e = expected_p[k] * static_cast<double>(total);
    stat += (static_cast<double>(observed[k]) - e) * (static_cast<double>(observed[k]) - e) / e;
  }
  return stat;
}

}  // namespace nibble::test
