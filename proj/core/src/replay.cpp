#include "nibble/replay.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace nibble {

ReplayVerdict replay_validate(std::span<const Decision> log, std::span<const Endpoints> stream) {
  auto fail = [](std::size_t at, std::string why) { return ReplayVerdict{false, at, std::move(why)}; };

  // (node, color) -> arrival index already holding it
  std::unordered_map<std::uint64_t, std::size_t> held;
  std::unordered_set<std::size_t> decided;
  std::size_t expected = 0;
  for (std::size_t k = 0; k < log.size(); ++k) {
    const Decision& d = log[k];
    if (decided.count(d.index) != 0) return fail(k, "arrival " + std::to_string(d.index) + " decided twice");
    if (d.index != expected) return fail(k, "expected arrival " + std::to_string(expected));
    if (d.index >= stream.size()) return fail(k, "decision past end of stream");
    const Endpoints want = Endpoints::normalized(stream[d.index].u, stream[d.index].v);
    if (!(Endpoints::normalized(d.edge.u, d.edge.v) == want)) return fail(k, "edge does not match arrival");
    if (d.color == kNoColor) return fail(k, "null color");
    for (NodeId x : {want.u, want.v}) {
      const std::uint64_t key = (std::uint64_t{x} << 32) | d.color;
      if (held.count(key) != 0) {
        return fail(k, "color " + std::to_string(d.color) + " already used at node " + std::to_string(x) +
                           " by arrival " + std::to_string(held[key]));
      }
    }
    for (NodeId x : {want.u, want.v}) held[(std::uint64_t{x} << 32) | d.color] = d.index;
    decided.insert(d.index);
    ++expected;
  }
  if (expected != stream.size()) return fail(log.size(), "log ends before the stream");
  return {};
}

std::optional<std::size_t> check_prefix_causality(const OnlineRun& run, std::span<const Endpoints> stream,
                                                  std::span<const Endpoints> perturbed,
                                                  std::span<const std::size_t> cuts) {
  const std::vector<Color> base = run(stream);
  for (std::size_t cut : cuts) {
    std::vector<Endpoints> mixed(stream.begin(), stream.begin() + static_cast<std::ptrdiff_t>(cut));
    mixed.insert(mixed.end(), perturbed.begin() + static_cast<std::ptrdiff_t>(cut), perturbed.end());
    const std::vector<Color> other = run(mixed);
    if (!std::equal(base.begin(), base.begin() + static_cast<std::ptrdiff_t>(cut), other.begin())) return cut;
  }
  return std::nullopt;
}

}  // namespace nibble
