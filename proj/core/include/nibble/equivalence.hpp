#pragma once

// Dynamic-vs-static comparison on scripted toy instances.
//
// With every pair's round pinned, the dynamic colorer's state after an update
// sequence should be distributed like one static run of phase one on the final
// graph. Outcomes are per-edge codes 2c + f (c the tentative color, f the
// failed flag), edges in ascending key order; round-t edges always code 0.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "nibble/events.hpp"
#include "nibble/types.hpp"

namespace nibble {

struct ScriptedScenario {
  std::size_t n = 0;
  std::size_t delta = 0;
  double epsilon = 0.0;
  unsigned K = 1;
  unsigned t_eps = 1;
  UpdateStream updates;
  /// Round of every pair that is ever present.
  std::vector<std::pair<Endpoints, unsigned>> rounds;
};

/// 5 nodes, 8 updates, rounds 1..3.
ScriptedScenario toy_scenario();

/// Final edges of the scenario in ascending key order, with their rounds.
std::vector<std::pair<Endpoints, unsigned>> final_edges(const ScriptedScenario& s);

/// Exact outcome pmf of phase one on the final graph, by enumerating every
/// sequence of palette draws. Throws Error{kResourceLimit} past `max_outcomes`
/// enumeration leaves.
Pmf exact_static_pmf(const ScriptedScenario& s, std::size_t max_outcomes = 10'000);

/// Independent phase-one runs on the final graph.
std::vector<Outcome> sample_static(const ScriptedScenario& s, std::size_t trials, std::uint64_t seed);

/// Independent dynamic runs over the update sequence; one outcome per run.
std::vector<Outcome> sample_dynamic(const ScriptedScenario& s, std::size_t trials, std::uint64_t seed);

struct EquivalenceReport {
  std::size_t edges = 0;
  std::vector<double> edge_tv_dynamic_static;  // per edge, two-sample
  std::vector<double> edge_tv_dynamic_exact;   // per edge, against enumeration
  double max_edge_tv = 0.0;                    // max over both lists
  double joint_tv_dynamic_static = 0.0;
  double joint_tv_dynamic_exact = 0.0;
  double joint_tv_static_exact = 0.0;
};

EquivalenceReport compare_dynamic_static(const ScriptedScenario& s, std::size_t trials, std::uint64_t seed);

}  // namespace nibble
