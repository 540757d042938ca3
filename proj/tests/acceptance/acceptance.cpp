// Acceptance checks 1-12. One PASS/FAIL line per criterion; exit status is
// nonzero when any selected criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nibble/baselines.hpp"
#include "nibble/dynamic.hpp"
#include "nibble/equivalence.hpp"
#include "nibble/events.hpp"
#include "nibble/experiment.hpp"
#include "nibble/generators.hpp"
#include "nibble/random_order.hpp"
#include "nibble/studies.hpp"

using namespace nibble;

namespace {

// Tolerances and budgets, pinned.
constexpr std::size_t kPropernessRuns = 200;
constexpr double kPropernessMinutes = 10.0;
constexpr std::uint64_t kGreedyEdges = 1'000'000;
constexpr double kSamplerFreqTol = 0.004;
constexpr double kSamplerCovTol = 0.003;
constexpr std::size_t kSamplerPairs = 50;
constexpr std::size_t kSamplerTrials = 100'000;
constexpr double kSamplerSeconds = 30.0;
constexpr std::size_t kAlg2Trials = 100'000;
constexpr double kAlg2Tol = 0.01;
constexpr double kAlg2Seconds = 10.0;
constexpr std::size_t kEquivTrials = 100'000;
constexpr double kEquivTv = 0.05;
constexpr double kEquivMinutes = 5.0;
constexpr double kRecourseRatio = 1.5;
constexpr double kRecourseMinutes = 10.0;
constexpr double kDirtyFactor = 6.0;
constexpr double kDirtyStdErrs = 3.0;
constexpr double kEventSlack = 0.1;
constexpr double kEventPass = 0.99;
constexpr double kEventMinutes = 5.0;
constexpr double kWarmupWinRate = 0.95;
constexpr double kWarmupMeanFactor = 1.6;
constexpr double kWarmupMinutes = 5.0;
constexpr double kLowerBoundRate = 0.5;
constexpr double kLowerBoundMinutes = 1.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::vector<std::uint64_t> seed_range(std::uint64_t first, std::size_t count) {
  std::vector<std::uint64_t> s(count);
  for (std::size_t k = 0; k < count; ++k) s[k] = first + k;
  return s;
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Shared by criteria 1 and 3.
struct ProperRuns {
  bool done = false;
  std::vector<ExperimentRecord> records;
  double seconds = 0.0;
};

ProperRuns& proper_runs() {
  static ProperRuns runs;
  if (runs.done) return runs;
  const auto t0 = Clock::now();
  struct Plan {
    Algorithm algo;
    std::size_t n, delta, updates;
    double eps, slack;
  };
  const std::array<Plan, 5> plans{{
      {Algorithm::kGreedy, 2000, 500, 0, 0.1, 0.2},
      {Algorithm::kBasic, 2000, 200, 0, 0.05, 0.0},
      {Algorithm::kWarmup, 2000, 200, 0, 0.1, 0.0},
      {Algorithm::kGeneral, 400, 40, 0, 0.1, 0.3},
      {Algorithm::kDynamic, 150, 12, 1500, 0.2, 0.0},
  }};
  for (const Plan& p : plans) {
    ExperimentConfig cfg;
    cfg.algorithm = p.algo;
    cfg.instance.n = p.n;
    cfg.instance.delta = p.delta;
    cfg.instance.slack = p.slack;
    cfg.instance.updates = p.updates;
    cfg.epsilon = p.eps;
    cfg.K = 1;
    cfg.seeds = seed_range(1000, kPropernessRuns / plans.size());
    cfg.verify.every_update = true;
    cfg.verify.replay = p.algo != Algorithm::kBasic && p.algo != Algorithm::kDynamic;
    auto recs = run_experiment(cfg);
    runs.records.insert(runs.records.end(), recs.begin(), recs.end());
  }
  runs.seconds = seconds_since(t0);
  runs.done = true;
  return runs;
}

Verdict c1() {
  const ProperRuns& runs = proper_runs();
  std::size_t failures = 0;
  std::map<std::string, std::size_t> per_algo;
  for (const ExperimentRecord& r : runs.records) {
    ++per_algo[std::string(to_string(r.algorithm))];
    if (!r.proper || (r.replay_ok && !*r.replay_ok)) ++failures;
  }
  const bool ok = failures == 0 && runs.records.size() == kPropernessRuns && per_algo.size() == 5 &&
                  runs.seconds < kPropernessMinutes * 60;
  return {ok, fmt("%zu runs over %zu algorithms, %zu improper, %.1f s", runs.records.size(), per_algo.size(),
                  failures, runs.seconds)};
}

Verdict c2() {
  std::uint64_t edges = 0;
  std::size_t violations = 0;
  std::size_t streams = 0;
  std::uint64_t seed = 1;
  auto feed = [&](const EdgeStream& s, std::size_t delta, std::size_t n) {
    GreedyOnline g(n);
    for (const Endpoints& e : s) {
      if (g.push(e.u, e.v) > 2 * delta - 1) ++violations;
    }
    edges += s.size();
    ++streams;
  };
  // near-regular streams of several densities, then lower-bound instances
  const std::array<std::pair<std::size_t, std::size_t>, 4> shapes{{{2000, 500}, {2000, 64}, {500, 7}, {2000, 3}}};
  while (edges < kGreedyEdges) {
    for (const auto& [n, delta] : shapes) {
      const Graph g = gen_near_regular(n, delta, 0.3, seed);
      feed(gen_random_order_stream(g, seed + 7), max_degree(g), n);
      ++seed;
    }
    LowerBoundParams lb;
    lb.delta = 2;
    lb.seed = seed++;
    const LowerBoundInstance inst = gen_lower_bound_instance(lb);
    feed(inst.stream, 2, inst.graph.node_count());
  }
  return {violations == 0, fmt("%llu edges in %zu streams, %zu colors above 2D-1",
                               static_cast<unsigned long long>(edges), streams, violations)};
}

Verdict c3() {
  const ProperRuns& runs = proper_runs();
  std::size_t checked = 0, bad = 0;
  for (const ExperimentRecord& r : runs.records) {
    if (r.algorithm == Algorithm::kGreedy) continue;
    ++checked;
    if (!r.band_ok.value_or(false)) ++bad;
  }
  return {bad == 0 && checked > 0, fmt("%zu banded runs, %zu with band violations", checked, bad)};
}

Verdict c4() {
  const auto t0 = Clock::now();
  const std::size_t total = 100;
  const double eps = 0.2;
  // Elements arrive in uniformly random order and the
  // round-1 sample is the first b_1 of them.
  Rng rng(mix_keys(4, 1));
  std::vector<std::size_t> order(total);
  std::vector<std::vector<std::uint8_t>> member(kSamplerTrials, std::vector<std::uint8_t>(total, 0));
  std::vector<double> freq(total, 0.0);
  for (std::size_t t = 0; t < kSamplerTrials; ++t) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    const std::size_t b1 = binomial_prefix_partition(total, eps, 1, rng)[0];
    for (std::size_t k = 0; k < b1; ++k) member[t][order[k]] = 1;
    for (std::size_t k = 0; k < total; ++k) freq[k] += member[t][k];
  }
  double worst_freq = 0.0;
  for (double& f : freq) {
    f /= static_cast<double>(kSamplerTrials);
    worst_freq = std::max(worst_freq, std::abs(f - eps));
  }
  Rng pick(mix_keys(4, 2));
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  while (pairs.size() < kSamplerPairs) {
    const std::size_t a = uniform_index(pick, total), b = uniform_index(pick, total);
    if (a != b) pairs.insert({std::min(a, b), std::max(a, b)});
  }
  double worst_cov = 0.0;
  for (const auto& [a, b] : pairs) {
    std::size_t both = 0;
    for (std::size_t t = 0; t < kSamplerTrials; ++t) both += member[t][a] & member[t][b];
    const double cov = static_cast<double>(both) / kSamplerTrials - freq[a] * freq[b];
    worst_cov = std::max(worst_cov, std::abs(cov));
  }
  const double secs = seconds_since(t0);
  const bool ok = worst_freq <= kSamplerFreqTol && worst_cov < kSamplerCovTol && secs < kSamplerSeconds;
  return {ok, fmt("max |freq-0.2| = %.4f (tol %.3f), max |cov| = %.4f over %zu pairs (tol %.3f), %.1f s",
                  worst_freq, kSamplerFreqTol, worst_cov, pairs.size(), kSamplerCovTol, secs)};
}

Verdict c5() {
  const auto t0 = Clock::now();
  struct Case {
    Color prev;
    std::vector<Color> p_prev, p_now;
    std::array<double, 3> expect;  // P(null), P(1), P(2)
  };
  const std::vector<Case> cases{
      {1, {1, 2}, {2}, {0.0, 0.0, 1.0}},
      {1, {1, 2}, {1, 2}, {0.0, 1.0, 0.0}},
      {1, {1}, {1, 2}, {0.0, 0.5, 0.5}},
  };
  double worst = 0.0;
  Rng rng(mix_keys(5, 1));
  for (const Case& c : cases) {
    std::array<std::size_t, 3> counts{};
    for (std::size_t k = 0; k < kAlg2Trials; ++k) ++counts[tentatively_color(c.prev, c.p_prev, c.p_now, rng)];
    for (int x = 0; x < 3; ++x) {
      worst = std::max(worst, std::abs(static_cast<double>(counts[x]) / kAlg2Trials - c.expect[x]));
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= kAlg2Tol && secs < kAlg2Seconds,
          fmt("3 cases x %zu trials, max deviation %.4f (tol %.2f), %.1f s", kAlg2Trials, worst, kAlg2Tol, secs)};
}

Verdict c6() {
  const auto t0 = Clock::now();
  const EquivalenceReport rep = compare_dynamic_static(toy_scenario(), kEquivTrials, 6);
  const double secs = seconds_since(t0);
  const bool ok = rep.max_edge_tv < kEquivTv && rep.joint_tv_dynamic_static < kEquivTv &&
                  rep.joint_tv_dynamic_exact < kEquivTv && secs < kEquivMinutes * 60;
  return {ok, fmt("%zu edges, max per-edge TV %.4f, joint TV dyn/static %.4f, dyn/exact %.4f, static/exact %.4f "
                  "(tol %.2f), %.1f s",
                  rep.edges, rep.max_edge_tv, rep.joint_tv_dynamic_static, rep.joint_tv_dynamic_exact,
                  rep.joint_tv_static_exact, kEquivTv, secs)};
}

// Shared by criteria 7 and 8.
struct RecourseRuns {
  bool done = false;
  std::vector<std::pair<std::size_t, RecourseStudy>> by_n;
  double seconds = 0.0;
};

RecourseRuns& recourse_runs() {
  static RecourseRuns runs;
  if (runs.done) return runs;
  const auto t0 = Clock::now();
  for (std::size_t n : {500, 1000, 2000}) {
    RecourseStudyConfig cfg;
    cfg.n = n;
    cfg.delta = 64;
    cfg.epsilon = 0.2;
    cfg.K = 1;
    cfg.updates = 10'000;
    cfg.seeds = seed_range(1, 10);
    runs.by_n.emplace_back(n, run_recourse_study(cfg));
  }
  runs.seconds = seconds_since(t0);
  runs.done = true;
  return runs;
}

Verdict c7() {
  const RecourseRuns& runs = recourse_runs();
  std::string detail;
  for (const auto& [n, s] : runs.by_n) {
    detail += fmt("n=%zu mean %.4f (with dummy %.4f); ", n, s.mean_recourse, s.mean_total_recourse);
  }
  const double small = runs.by_n.front().second.mean_recourse;
  const double large = runs.by_n.back().second.mean_recourse;
  const bool ok = large <= kRecourseRatio * small && runs.seconds < kRecourseMinutes * 60;
  return {ok, detail + fmt("ratio %.3f (max %.1f), %.1f s", small > 0 ? large / small : 0.0, kRecourseRatio,
                           runs.seconds)};
}

Verdict c8() {
  const RecourseRuns& runs = recourse_runs();
  bool ok = true;
  double worst_margin = -1e300;  // max over (lhs - rhs)
  std::string where;
  for (const auto& [n, s] : runs.by_n) {
    const DirtyStats& d = s.dirty;
    for (std::size_t i = 0; i < d.mean.size(); ++i) {
      const double rhs = kDirtyFactor * 0.2 * (1.0 + d.mean_below[i]) + kDirtyStdErrs * d.stderr_mean[i];
      const double margin = d.mean[i] - rhs;
      if (margin > worst_margin) {
        worst_margin = margin;
        where = fmt("n=%zu round %zu: E|D_i| %.4f vs %.4f", n, i + 1, d.mean[i], rhs);
      }
      if (margin > 0) ok = false;
    }
  }
  return {ok, "tightest " + where};
}

Verdict c9() {
  const auto t0 = Clock::now();
  EventStudyConfig cfg;
  cfg.n = 2000;
  cfg.delta = 1000;
  cfg.epsilon = 0.05;
  cfg.K = 48;
  cfg.rounds = 3;
  cfg.seeds = seed_range(1, 10);
  cfg.slack = kEventSlack;
  const EventStudy study = run_event_study(cfg);
  const EventReport& r = study.pooled;
  const double secs = seconds_since(t0);
  const double pal = r.min_palette_fraction(), cdeg = r.min_c_degree_fraction(), samp = r.min_sampled_fraction();
  std::size_t worst_failed = 0;
  double bound = 0.0;
  for (const RoundEventReport& rr : r.rounds) {
    worst_failed = std::max(worst_failed, rr.failed_max_degree);
    bound = rr.failed_degree_bound;
  }
  const bool ok = pal >= kEventPass && cdeg >= kEventPass && samp >= kEventPass && r.failed_degrees_ok() &&
                  secs < kEventMinutes * 60;
  std::string rounds;
  for (const RoundEventReport& rr : r.rounds) {
    rounds += fmt(" [round %u: palette %.3f, c-degree %.3f, node-sampled %.3f, color-sampled %.3f]", rr.round,
                  rr.palette.pass_fraction(), rr.c_degree.pass_fraction(), rr.node_sampled.pass_fraction(),
                  rr.color_sampled.pass_fraction());
  }
  return {ok, fmt("min pass: palette %.3f, c-degree %.3f, sampled %.3f (need %.2f); max failed degree %zu vs %.1f; "
                  "%.1f s;",
                  pal, cdeg, samp, kEventPass, worst_failed, bound, secs) +
                  rounds};
}

Verdict c10() {
  const auto t0 = Clock::now();
  const std::size_t n = 2000, delta = 300;
  std::size_t wins = 0;
  double total = 0.0;
  const auto seeds = seed_range(1, 20);
  double greedy_total = 0.0;
  for (std::uint64_t seed : seeds) {
    const Graph g = gen_near_regular(n, delta, 0.0, mix_keys(seed, 10));
    const EdgeStream s = gen_random_order_stream(g, mix_keys(seed, 11));
    Rng rng(mix_keys(seed, 12));
    const WarmupResult w = run_warmup(s, n, delta, s.size(), 0.1, 1, rng);
    const std::vector<Color> gr = greedy_online(s, n);
    const std::size_t greedy_colors = *std::max_element(gr.begin(), gr.end());
    if (w.metrics.colors_used < greedy_colors) ++wins;
    total += static_cast<double>(w.metrics.colors_used);
    greedy_total += static_cast<double>(greedy_colors);
  }
  const double rate = static_cast<double>(wins) / seeds.size();
  const double mean = total / seeds.size();
  const double secs = seconds_since(t0);
  const bool ok = rate >= kWarmupWinRate && mean <= kWarmupMeanFactor * delta && secs < kWarmupMinutes * 60;
  return {ok, fmt("warm-up below greedy in %zu/%zu seeds (need %.0f%%); mean colors %.1f vs bound %.0f "
                  "(greedy mean %.1f); %.1f s",
                  wins, seeds.size(), 100 * kWarmupWinRate, mean, kWarmupMeanFactor * delta,
                  greedy_total / seeds.size(), secs)};
}

Verdict c11() {
  const auto t0 = Clock::now();
  std::size_t hits = 0;
  const std::size_t seeds = 200;
  std::size_t copies = 0;
  for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
    LowerBoundParams p;
    p.delta = 2;
    p.node_budget = 10'000;
    p.seed = seed;
    const LowerBoundInstance inst = gen_lower_bound_instance(p);
    copies = inst.copies;
    const std::vector<Color> c = greedy_online(inst.stream, inst.graph.node_count());
    if (*std::max_element(c.begin(), c.end()) == 3) ++hits;
  }
  const double rate = static_cast<double>(hits) / seeds;
  const double secs = seconds_since(t0);
  return {rate >= kLowerBoundRate && secs < kLowerBoundMinutes * 60,
          fmt("%zu copies per instance; greedy used 3 colors in %zu/%zu seeds (need %.0f%%); %.1f s", copies, hits,
              seeds, 100 * kLowerBoundRate, secs)};
}

Verdict c12() {
  std::size_t configs = 0, mismatches = 0;
  for (Algorithm a :
       {Algorithm::kBasic, Algorithm::kWarmup, Algorithm::kGeneral, Algorithm::kDynamic, Algorithm::kGreedy}) {
    ExperimentConfig cfg;
    cfg.algorithm = a;
    cfg.instance.n = 300;
    cfg.instance.delta = 30;
    cfg.instance.updates = 1000;
    cfg.epsilon = 0.1;
    cfg.K = 1;
    cfg.seeds = {1, 2, 3, 4};
    cfg.verify.replay = a == Algorithm::kWarmup || a == Algorithm::kGeneral;
    std::string first;
    for (unsigned threads : {1U, 1U, 4U}) {
      cfg.threads = threads;
      std::ostringstream out;
      write_csv(out, run_experiment(cfg));
      if (first.empty()) {
        first = out.str();
      } else if (out.str() != first) {
        ++mismatches;
      }
    }
    ++configs;
  }
  return {mismatches == 0, fmt("%zu configs x 3 reruns, %zu differing outputs", configs, mismatches)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::vector<int> only;
  app.add_option("--only", only, "criteria to run (default: all)")->check(CLI::Range(1, 12));
  CLI11_PARSE(app, argc, argv);

  const std::array<std::pair<const char*, std::function<Verdict()>>, 12> checks{{
      {"properness", c1},
      {"greedy bound", c2},
      {"color bands", c3},
      {"prefix sampler", c4},
      {"TentativelyColor marginals", c5},
      {"dynamic/static equivalence", c6},
      {"recourse flat in n", c7},
      {"dirty-set recursion", c8},
      {"concentration envelopes", c9},
      {"warm-up vs greedy", c10},
      {"lower-bound instance", c11},
      {"determinism", c12},
  }};
  bool all = true;
  for (int k = 1; k <= 12; ++k) {
    if (!only.empty() && std::find(only.begin(), only.end(), k) == only.end()) continue;
    Verdict v;
    try {
      v = checks[k - 1].second();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    all = all && v.pass;
    std::cout << "criterion " << k << " " << (v.pass ? "PASS" : "FAIL") << " " << checks[k - 1].first << ": "
              << v.detail << std::endl;
  }
  return all ? 0 : 1;
}
