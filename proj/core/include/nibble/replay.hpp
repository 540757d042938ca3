#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nibble/types.hpp"

namespace nibble {

/// One irrevocable online decision: arrival `index` (0-based) got `color`.
struct Decision {
  std::size_t index = 0;
  Endpoints edge;
  Color color = kNoColor;

  friend bool operator==(const Decision&, const Decision&) = default;
};

using DecisionLog = std::vector<Decision>;

struct ReplayVerdict {
  bool valid = true;
  std::optional<std::size_t> offending_index;  // position in the log
  std::string reason;
};

/// Checks that the log has exactly one decision per arrival, in arrival order,
/// for the right edge, with a non-null color, and that no decision clashes with
/// an earlier one at a shared node. A second decision for an arrival that was
/// already decided (a retroactive recolor) is reported at its log position.
ReplayVerdict replay_validate(std::span<const Decision> log, std::span<const Endpoints> stream);

/// Runs an online algorithm on the stream and on copies whose suffix after
/// each cut point was replaced by `perturb`, and checks that decisions on the
/// shared prefix are identical. Returns the first failing cut, if any.
using OnlineRun = std::function<std::vector<Color>(std::span<const Endpoints>)>;
std::optional<std::size_t> check_prefix_causality(const OnlineRun& run, std::span<const Endpoints> stream,
                                                  std::span<const Endpoints> perturbed,
                                                  std::span<const std::size_t> cuts);

}  // namespace nibble
