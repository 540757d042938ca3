#include "nibble/studies.hpp"

#include "nibble/basic.hpp"
#include "nibble/generators.hpp"
#include "nibble/random.hpp"

namespace nibble {
namespace {

constexpr std::uint64_t kGraphTag = 0x67726170ULL;
constexpr std::uint64_t kRunTag = 0x72756eULL;
constexpr std::uint64_t kMeasureTag = 0x6d656173ULL;

}  // namespace

EventStudy run_event_study(const EventStudyConfig& c) {
  EventStudy out;
  const Params params = make_params(c.n, c.delta, c.epsilon, c.K, c.rounds + 1);
  for (std::uint64_t seed : c.seeds) {
    const Graph g = gen_near_regular(c.n, c.delta, c.degree_slack, mix_keys(seed, kGraphTag));
    PhaseOneOptions options;
    options.events.enabled = true;
    options.events.budget = c.budget;
    options.events.full_sweep = c.full_sweep;
    options.events.seed = mix_keys(seed, kMeasureTag);
    Rng rng(mix_keys(seed, kRunTag));
    const PhaseOneResult res = run_phase_one(g, params, rng, options);
    EventReport rep = verify_events(res.trace, params, {c.slack, c.gamma_scale}, c.rounds);
    merge_event_reports(out.pooled, rep);
    out.per_seed.push_back(std::move(rep));
  }
  return out;
}

RecourseStudy run_recourse_study(const RecourseStudyConfig& c) {
  RecourseStudy out;
  std::vector<SubUpdateReport> pooled;
  double total = 0.0;
  for (std::uint64_t seed : c.seeds) {
    const UpdateStream updates = gen_update_sequence(c.n, c.delta, c.updates, c.churn, mix_keys(seed, kGraphTag));
    const Params params = derive_params(c.gadget ? c.n * (c.delta + 1) : c.n, c.delta, c.epsilon, c.K);
    DynamicOptions options;
    options.gadget = c.gadget;
    DynamicColorer dc(c.n, params, mix_keys(seed, kRunTag), options);
    std::vector<UpdateReport> log;
    log.reserve(updates.size());
    for (const Update& up : updates) log.push_back(dc.apply(up));
    RecourseStats stats = recourse_stats(log);
    out.mean_recourse += stats.mean;
    total += stats.mean + stats.mean_dummy;
    out.bound_violations += stats.bound_violations;
    out.per_seed.push_back(std::move(stats));
    pooled.insert(pooled.end(), dc.sub_log().begin(), dc.sub_log().end());
  }
  if (!c.seeds.empty()) {
    out.mean_recourse /= static_cast<double>(c.seeds.size());
    out.mean_total_recourse = total / static_cast<double>(c.seeds.size());
  }
  out.dirty = dirty_stats(pooled);
  return out;
}

}  // namespace nibble
