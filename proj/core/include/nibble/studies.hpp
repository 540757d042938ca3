#pragma once

// Multi-seed studies behind `nibble verify` / `nibble bench` and the
// acceptance checks.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "nibble/dynamic.hpp"
#include "nibble/events.hpp"

namespace nibble {

struct EventStudyConfig {
  std::size_t n = 2000;
  std::size_t delta = 1000;
  double epsilon = 0.05;
  unsigned K = kDefaultK;
  /// Rounds to check; phase one runs this many rounds (t = rounds + 1).
  unsigned rounds = 3;
  std::vector<std::uint64_t> seeds;
  double slack = 0.1;
  double gamma_scale = 1.0;
  std::size_t budget = 10'000;
  bool full_sweep = false;
  /// Degree window of the generated graphs, relative to Δ.
  double degree_slack = 0.0;
};

struct EventStudy {
  EventReport pooled;
  std::vector<EventReport> per_seed;
};

EventStudy run_event_study(const EventStudyConfig& config);

struct RecourseStudyConfig {
  std::size_t n = 500;
  std::size_t delta = 64;
  double epsilon = 0.2;
  unsigned K = 1;
  std::size_t updates = 10'000;
  double churn = 0.5;
  std::vector<std::uint64_t> seeds;
  bool gadget = true;
};

struct RecourseStudy {
  std::vector<RecourseStats> per_seed;
  double mean_recourse = 0.0;        // real edges, averaged over seeds
  double mean_total_recourse = 0.0;  // real + dummy
  std::size_t bound_violations = 0;
  DirtyStats dirty;  // pooled over seeds, per G' update
};

RecourseStudy run_recourse_study(const RecourseStudyConfig& config);

}  // namespace nibble
