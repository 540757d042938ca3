#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "nibble/basic.hpp"
#include "nibble/params.hpp"

namespace nibble {

struct EventTolerance {
  /// Relative widening of every envelope: [lo (1 - slack), hi (1 + slack)].
  double slack = 0.1;
  /// Multiplies every gamma_i (negative controls use 0.5).
  double gamma_scale = 1.0;
};

struct EnvelopeCheck {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t samples = 0;
  std::size_t inside = 0;
  double observed_min = 0.0;
  double observed_max = 0.0;

  /// 1 when nothing was sampled.
  double pass_fraction() const {
    return samples == 0 ? 1.0 : static_cast<double>(inside) / static_cast<double>(samples);
  }
};

struct RoundEventReport {
  unsigned round = 0;
  double center = 0.0;  // (1-eps)^(2(i-1)) Δ
  double gamma = 0.0;
  EnvelopeCheck palette;        // |P_i(e)|
  EnvelopeCheck c_degree;       // |N_{i,c}(v)|
  EnvelopeCheck node_sampled;   // |S_i ∩ N_i(v)| / |N_i(v)|
  EnvelopeCheck color_sampled;  // |S_i ∩ N_{i,c}(v)| / |N_{i,c}(v)|
  std::size_t failed_max_degree = 0;
  double failed_degree_bound = 0.0;  // 9 eps^2 Δ + 3 sqrt(Δ ln n)
  bool failed_degree_ok = true;
};

struct EventReport {
  std::vector<RoundEventReport> rounds;

  double min_palette_fraction() const;
  double min_c_degree_fraction() const;
  /// Worst of the node and color sampled-fraction checks.
  double min_sampled_fraction() const;
  bool failed_degrees_ok() const;
};

/// Checks the measured round quantities against their envelopes. Rounds
/// beyond `max_round` (0 = all) are skipped.
EventReport verify_events(std::span<const RoundTrace> trace, const Params& params,
                          const EventTolerance& tolerance = {}, unsigned max_round = 0);

/// Adds the checks of `other` into `into` (same rounds), for pooling seeds.
void merge_event_reports(EventReport& into, const EventReport& other);

// ---------------------------------------------------------------------------
// Distribution comparison

/// One sampled outcome over a finite space, e.g. per-edge (color, failed) codes.
using Outcome = std::vector<std::uint32_t>;
using Pmf = std::map<Outcome, double>;

struct TvResult {
  double tv = 0.0;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
};

Pmf empirical_pmf(std::span<const Outcome> samples);

/// Half the L1 distance between the two empirical pmfs. Throws
/// Error{kEmptySamples} if either side is empty.
TvResult tv_distance(std::span<const Outcome> a, std::span<const Outcome> b);

/// Distance from the empirical pmf of `samples` to an exact pmf.
TvResult tv_distance(std::span<const Outcome> samples, const Pmf& exact);

/// Projects every outcome onto coordinate k.
std::vector<Outcome> marginal(std::span<const Outcome> samples, std::size_t k);
Pmf marginal(const Pmf& pmf, std::size_t k);

}  // namespace nibble
