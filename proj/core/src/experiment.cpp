#include "nibble/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "nibble/baselines.hpp"
#include "nibble/events.hpp"
#include "nibble/generators.hpp"
#include "nibble/graph_io.hpp"
#include "nibble/random.hpp"
#include "nibble/replay.hpp"

namespace nibble {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::uint64_t kInstanceTag = 0x696e7374ULL;
constexpr std::uint64_t kOrderTag = 0x6f72646572ULL;
constexpr std::uint64_t kAlgoTag = 0x616c676fULL;
constexpr std::uint64_t kEventTag = 0x6576656e74ULL;

// ---------------------------------------------------------------------------
// Config parsing

[[noreturn]] void config_error(const std::string& origin, const std::string& field, const std::string& msg) {
  throw Error(ErrorCode::kConfig, origin + ": field '" + field + "': " + msg);
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& origin,
                    const std::string& prefix) {
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
      config_error(origin, prefix + key, "unknown field");
    }
  }
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& origin, const std::string& prefix = "") {
  const auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception& e) {
    config_error(origin, prefix + key, e.what());
  }
}

template <class T>
void read(const json& j, const char* key, std::optional<T>& out, const std::string& origin,
          const std::string& prefix = "") {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception& e) {
    config_error(origin, prefix + key, e.what());
  }
}

json result_affecting(const ExperimentConfig& c) {
  json inst = {{"source", c.instance.source}, {"path", c.instance.path},       {"n", c.instance.n},
               {"delta", c.instance.delta},   {"slack", c.instance.slack},     {"updates", c.instance.updates},
               {"churn", c.instance.churn},   {"shuffle", c.instance.shuffle}, {"seed", nullptr}};
  if (c.instance.seed) inst["seed"] = *c.instance.seed;
  return json{
      {"algorithm", std::string(to_string(c.algorithm))},
      {"instance", inst},
      {"epsilon", c.epsilon},
      {"K", c.K},
      {"t_eps", c.t_eps},
      {"seeds", c.seeds},
      {"gadget", c.gadget},
      {"strict_regularity", c.strict_regularity},
      {"verify",
       {{"events", c.verify.events},
        {"replay", c.verify.replay},
        {"every_update", c.verify.every_update},
        {"event_budget", c.verify.event_budget},
        {"full_sweep", c.verify.full_sweep},
        {"event_rounds", c.verify.event_rounds}}},
      {"thresholds",
       {{"slack", c.thresholds.slack},
        {"tv", c.thresholds.tv},
        {"chi2_alpha", c.thresholds.chi2_alpha},
        {"event_pass", c.thresholds.event_pass}}},
  };
}

// ---------------------------------------------------------------------------
// Instances

struct GraphInstance {
  Graph graph;
  EdgeStream stream;
  std::size_t n = 0;
  std::size_t delta = 0;
};

std::size_t resolve_delta(std::size_t configured, std::size_t header, std::span<const Endpoints> edges,
                          std::size_t n) {
  if (configured > 0) return configured;
  if (header > 0) return header;
  std::vector<std::size_t> deg(n, 0);
  std::size_t best = 0;
  for (const Endpoints& e : edges) {
    if (e.u >= n || e.v >= n) throw Error(ErrorCode::kNodeOutOfRange, "edge list names a node >= n");
    best = std::max({best, ++deg[e.u], ++deg[e.v]});
  }
  return std::max<std::size_t>(best, 1);
}

GraphInstance graph_instance(const ExperimentConfig& c, std::uint64_t seed) {
  GraphInstance out;
  const std::uint64_t inst_seed = c.instance.seed ? *c.instance.seed : mix_keys(seed, kInstanceTag);
  if (c.instance.source == "file") {
    EdgeListFile file = read_edge_list(c.instance.path);
    out.n = c.instance.n > 0 ? c.instance.n : file.header.node_count;
    out.delta = resolve_delta(c.instance.delta, file.header.max_degree, file.edges, out.n);
    out.graph = graph_from_edges(out.n, out.delta, file.edges);
    out.stream = std::move(file.edges);
    if (c.instance.shuffle) {
      Rng rng(mix_keys(seed, kOrderTag));
      std::shuffle(out.stream.begin(), out.stream.end(), rng);
    }
    return out;
  }
  out.n = c.instance.n;
  out.delta = c.instance.delta;
  out.graph = gen_near_regular(out.n, out.delta, c.instance.slack, inst_seed);
  out.stream = gen_random_order_stream(out.graph, mix_keys(seed, kOrderTag));
  return out;
}

Params params_for(const ExperimentConfig& c, std::size_t n, std::size_t delta) {
  return c.t_eps > 0 ? make_params(n, delta, c.epsilon, c.K, c.t_eps) : derive_params(n, delta, c.epsilon, c.K);
}

struct StreamCheck {
  bool proper = false;
  std::size_t colors_used = 0;
  Color max_color = kNoColor;
};

StreamCheck check_stream(const Graph& g, std::span<const Endpoints> stream, std::span<const Color> colors) {
  const EdgeColoring coloring = coloring_from_stream(g, stream, colors);
  const ColoringReport rep = verify_proper_coloring(g, coloring, true);
  const ColorUsage usage = color_usage(g, coloring);
  return {rep.valid, usage.distinct, usage.max_color};
}

void fill_events(ExperimentRecord& r, const EventReport& rep) {
  r.events_palette_pass = rep.min_palette_fraction();
  r.events_c_degree_pass = rep.min_c_degree_fraction();
  r.events_sampled_pass = rep.min_sampled_fraction();
  r.events_failed_degree_ok = rep.failed_degrees_ok();
}

// ---------------------------------------------------------------------------
// Per-algorithm runs

void run_basic_record(const ExperimentConfig& c, std::uint64_t seed, ExperimentRecord& r) {
  const GraphInstance inst = graph_instance(c, seed);
  const Params params = params_for(c, inst.n, inst.delta);
  PhaseOneOptions options;
  options.strict_regularity = c.strict_regularity;
  options.events.enabled = c.verify.events;
  options.events.budget = c.verify.event_budget;
  options.events.full_sweep = c.verify.full_sweep;
  options.events.seed = mix_keys(seed, kEventTag);
  Rng rng(mix_keys(seed, kAlgoTag));
  const BasicResult res = run_basic(inst.graph, params, rng, options);

  r.n = inst.n;
  r.delta = inst.delta;
  r.m = inst.graph.edge_count();
  r.t_eps = params.t_eps;
  r.C = params.phase1_colors;
  r.colors_used = res.metrics.colors_used;
  r.max_color = res.metrics.max_color;
  r.proper = verify_proper_coloring(inst.graph, res.coloring, true).valid;
  r.band_ok = basic_band_ok(inst.graph, res, params.phase1_colors);
  r.phase_one_colored = res.metrics.phase_one_colored;
  r.uncolored_max_degree = res.metrics.uncolored_max_degree;
  if (c.verify.events) {
    fill_events(r, verify_events(res.phase_one.trace, params, {c.thresholds.slack, 1.0}, c.verify.event_rounds));
  }
}

void run_greedy_record(const ExperimentConfig& c, std::uint64_t seed, ExperimentRecord& r) {
  const GraphInstance inst = graph_instance(c, seed);
  DecisionLog log;
  const std::vector<Color> colors = greedy_online(inst.stream, inst.n, c.verify.replay ? &log : nullptr);
  const StreamCheck chk = check_stream(inst.graph, inst.stream, colors);
  r.n = inst.n;
  r.delta = inst.delta;
  r.m = inst.stream.size();
  r.colors_used = chk.colors_used;
  r.max_color = chk.max_color;
  r.proper = chk.proper;
  if (c.verify.replay) r.replay_ok = replay_validate(log, inst.stream).valid;
}

void run_warmup_record(const ExperimentConfig& c, std::uint64_t seed, ExperimentRecord& r) {
  const GraphInstance inst = graph_instance(c, seed);
  const Params params = params_for(c, inst.n, inst.delta);
  Rng rng(mix_keys(seed, kAlgoTag));
  DecisionLog log;
  const WarmupResult res = run_warmup(inst.stream, params, inst.stream.size(), rng, c.verify.replay ? &log : nullptr);
  if (c.strict_regularity && res.metrics.regularity_warning) {
    throw Error(ErrorCode::kDegreeOutOfRange, "stream degrees leave [(1-eps^2)delta, (1+eps^2)delta]");
  }
  const StreamCheck chk = check_stream(inst.graph, inst.stream, res.colors);
  const std::vector<Color> greedy = greedy_online(inst.stream, inst.n);
  r.n = inst.n;
  r.delta = inst.delta;
  r.m = inst.stream.size();
  r.t_eps = params.t_eps;
  r.C = params.phase1_colors;
  r.colors_used = chk.colors_used;
  r.max_color = chk.max_color;
  r.proper = chk.proper;
  r.band_ok = warmup_band_ok(res.metrics);
  r.greedy_colors = check_stream(inst.graph, inst.stream, greedy).colors_used;
  r.tentative_band_edges = res.metrics.tentative_band_edges;
  r.greedy_band_edges = res.metrics.greedy_band_edges;
  if (c.verify.replay) r.replay_ok = replay_validate(log, inst.stream).valid;
}

void run_general_record(const ExperimentConfig& c, std::uint64_t seed, ExperimentRecord& r) {
  const GraphInstance inst = graph_instance(c, seed);
  Rng rng(mix_keys(seed, kAlgoTag));
  DecisionLog log;
  const GeneralResult res =
      run_general(inst.stream, inst.n, inst.delta, c.epsilon, c.K, rng, c.verify.replay ? &log : nullptr);
  const StreamCheck chk = check_stream(inst.graph, inst.stream, res.colors);
  const std::vector<Color> greedy = greedy_online(inst.stream, inst.n);
  const GeneralMetrics& m = res.metrics;
  r.n = inst.n;
  r.delta = inst.delta;
  r.m = inst.stream.size();
  r.t_eps = round_count(2.0 * c.epsilon, c.K);
  r.C = m.h_phase1_colors;
  r.colors_used = chk.colors_used;
  r.max_color = chk.max_color;
  r.proper = chk.proper;
  r.band_ok = general_band_ok(res);
  r.greedy_colors = check_stream(inst.graph, inst.stream, greedy).colors_used;
  r.T = m.T;
  r.m_prime = m.m_prime;
  r.m_prime_exceeds_m = m.m_prime_exceeds_m;
  r.delta1 = m.delta1;
  r.delta2 = m.delta2;
  r.delta3 = m.delta3;
  r.dummy_edges = m.dummy_edges;
  if (c.verify.replay) r.replay_ok = replay_validate(log, inst.stream).valid;
}

void run_dynamic_record(const ExperimentConfig& c, std::uint64_t seed, ExperimentRecord& r) {
  const std::uint64_t inst_seed = c.instance.seed ? *c.instance.seed : mix_keys(seed, kInstanceTag);
  UpdateStream updates;
  std::size_t n = c.instance.n;
  std::size_t delta = c.instance.delta;
  if (c.instance.source == "file") {
    UpdateStreamFile file = read_update_stream(c.instance.path);
    if (n == 0) n = file.header.node_count;
    if (delta == 0) delta = file.header.max_degree;
    if (delta == 0) throw Error(ErrorCode::kConfig, c.instance.path + ": update stream needs a delta");
    updates = std::move(file.updates);
  } else {
    updates = gen_update_sequence(n, delta, c.instance.updates, c.instance.churn, inst_seed);
  }
  // G' has n(Δ+1) nodes in gadget mode; Δ is unchanged.
  const Params params = params_for(c, c.gadget ? n * (delta + 1) : n, delta);
  DynamicOptions options;
  options.gadget = c.gadget;
  DynamicColorer dc(n, params, mix_keys(seed, kAlgoTag), options);
  bool proper = dc.verify().valid;
  bool band = dc.band_discipline_ok();
  r.update_log.reserve(updates.size());
  for (const Update& up : updates) {
    r.update_log.push_back(dc.apply(up));
    if (c.verify.every_update) {
      proper = proper && dc.verify().valid;
      band = band && dc.band_discipline_ok();
    }
  }
  proper = proper && dc.verify().valid;
  band = band && dc.band_discipline_ok();

  const RecourseStats stats = recourse_stats(r.update_log);
  const EdgeColoring coloring = dc.coloring();
  Color max_color = kNoColor;
  std::size_t real_edges = 0;
  for (EdgeId e : dc.graph().edge_ids()) {
    if (!dc.is_real_edge(e)) continue;
    ++real_edges;
    max_color = std::max(max_color, coloring.at(e));
  }
  r.n = n;
  r.delta = delta;
  r.m = real_edges;
  r.t_eps = params.t_eps;
  r.C = params.phase1_colors;
  r.colors_used = dc.colors_in_use();
  r.max_color = max_color;
  r.proper = proper;
  r.band_ok = band;
  r.updates = updates.size();
  r.mean_recourse = stats.mean;
  r.max_recourse = stats.max;
  r.mean_dummy_recourse = stats.mean_dummy;
  r.bound_violations = stats.bound_violations;
}

// ---------------------------------------------------------------------------
// Output

template <class T>
ordered_json opt(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json record_json(const ExperimentRecord& r) {
  ordered_json j;
  j["config_hash"] = r.config_hash;
  j["seed"] = r.seed;
  j["algorithm"] = std::string(to_string(r.algorithm));
  j["n"] = r.n;
  j["delta"] = r.delta;
  j["m"] = r.m;
  j["epsilon"] = r.epsilon;
  j["K"] = r.K;
  j["t_eps"] = opt(r.t_eps);
  j["C"] = opt(r.C);
  j["colors_used"] = r.colors_used;
  j["max_color"] = r.max_color;
  j["proper"] = r.proper;
  j["band_ok"] = opt(r.band_ok);
  j["phase_one_colored"] = opt(r.phase_one_colored);
  j["uncolored_max_degree"] = opt(r.uncolored_max_degree);
  j["greedy_colors"] = opt(r.greedy_colors);
  j["tentative_band_edges"] = opt(r.tentative_band_edges);
  j["greedy_band_edges"] = opt(r.greedy_band_edges);
  j["T"] = opt(r.T);
  j["m_prime"] = opt(r.m_prime);
  j["m_prime_exceeds_m"] = opt(r.m_prime_exceeds_m);
  j["delta1"] = opt(r.delta1);
  j["delta2"] = opt(r.delta2);
  j["delta3"] = opt(r.delta3);
  j["dummy_edges"] = opt(r.dummy_edges);
  j["updates"] = opt(r.updates);
  j["mean_recourse"] = opt(r.mean_recourse);
  j["max_recourse"] = opt(r.max_recourse);
  j["mean_dummy_recourse"] = opt(r.mean_dummy_recourse);
  j["bound_violations"] = opt(r.bound_violations);
  j["replay_ok"] = opt(r.replay_ok);
  j["events_palette_pass"] = opt(r.events_palette_pass);
  j["events_c_degree_pass"] = opt(r.events_c_degree_pass);
  j["events_sampled_pass"] = opt(r.events_sampled_pass);
  j["events_failed_degree_ok"] = opt(r.events_failed_degree_ok);
  j["runtime_ms"] = opt(r.runtime_ms);
  return j;
}

std::string csv_cell(const ordered_json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kBasic: return "basic";
    case Algorithm::kWarmup: return "warmup";
    case Algorithm::kGeneral: return "general";
    case Algorithm::kDynamic: return "dynamic";
    case Algorithm::kGreedy: return "greedy";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::kBasic, Algorithm::kWarmup, Algorithm::kGeneral, Algorithm::kDynamic,
                      Algorithm::kGreedy}) {
    if (to_string(a) == name) return a;
  }
  throw Error(ErrorCode::kConfig, "unknown algorithm '" + std::string(name) + "'");
}

ExperimentConfig config_from_json(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kConfig, origin + ": " + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kConfig, origin + ": top level must be an object");
  reject_unknown(j,
                 {"algorithm", "instance", "epsilon", "K", "t_eps", "seeds", "gadget", "strict_regularity", "verify",
                  "thresholds", "output", "format", "timing", "threads"},
                 origin, "");
  ExperimentConfig c;
  std::string algo = std::string(to_string(c.algorithm));
  read(j, "algorithm", algo, origin);
  try {
    c.algorithm = parse_algorithm(algo);
  } catch (const Error& e) {
    config_error(origin, "algorithm", e.what());
  }
  if (const auto it = j.find("instance"); it != j.end()) {
    if (!it->is_object()) config_error(origin, "instance", "must be an object");
    reject_unknown(*it, {"source", "path", "n", "delta", "slack", "updates", "churn", "seed", "shuffle"}, origin,
                   "instance.");
    InstanceConfig& ic = c.instance;
    read(*it, "source", ic.source, origin, "instance.");
    read(*it, "path", ic.path, origin, "instance.");
    read(*it, "n", ic.n, origin, "instance.");
    read(*it, "delta", ic.delta, origin, "instance.");
    read(*it, "slack", ic.slack, origin, "instance.");
    read(*it, "updates", ic.updates, origin, "instance.");
    read(*it, "churn", ic.churn, origin, "instance.");
    read(*it, "seed", ic.seed, origin, "instance.");
    read(*it, "shuffle", ic.shuffle, origin, "instance.");
  }
  read(j, "epsilon", c.epsilon, origin);
  read(j, "K", c.K, origin);
  read(j, "t_eps", c.t_eps, origin);
  read(j, "seeds", c.seeds, origin);
  read(j, "gadget", c.gadget, origin);
  read(j, "strict_regularity", c.strict_regularity, origin);
  if (const auto it = j.find("verify"); it != j.end()) {
    if (!it->is_object()) config_error(origin, "verify", "must be an object");
    reject_unknown(*it, {"events", "replay", "every_update", "event_budget", "full_sweep", "event_rounds"}, origin,
                   "verify.");
    read(*it, "events", c.verify.events, origin, "verify.");
    read(*it, "replay", c.verify.replay, origin, "verify.");
    read(*it, "every_update", c.verify.every_update, origin, "verify.");
    read(*it, "event_budget", c.verify.event_budget, origin, "verify.");
    read(*it, "full_sweep", c.verify.full_sweep, origin, "verify.");
    read(*it, "event_rounds", c.verify.event_rounds, origin, "verify.");
  }
  if (const auto it = j.find("thresholds"); it != j.end()) {
    if (!it->is_object()) config_error(origin, "thresholds", "must be an object");
    reject_unknown(*it, {"slack", "tv", "chi2_alpha", "event_pass"}, origin, "thresholds.");
    read(*it, "slack", c.thresholds.slack, origin, "thresholds.");
    read(*it, "tv", c.thresholds.tv, origin, "thresholds.");
    read(*it, "chi2_alpha", c.thresholds.chi2_alpha, origin, "thresholds.");
    read(*it, "event_pass", c.thresholds.event_pass, origin, "thresholds.");
  }
  read(j, "output", c.output, origin);
  read(j, "format", c.format, origin);
  read(j, "timing", c.timing, origin);
  read(j, "threads", c.threads, origin);
  validate_config(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return config_from_json(buf.str(), path.string());
}

std::string config_to_json(const ExperimentConfig& c) {
  json j = result_affecting(c);
  j["output"] = c.output;
  j["format"] = c.format;
  j["timing"] = c.timing;
  j["threads"] = c.threads;
  return j.dump(2);
}

std::string config_hash(const ExperimentConfig& c) {
  const std::string canonical = result_affecting(c).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void validate_config(const ExperimentConfig& c) {
  const std::string origin = "<config>";
  if (c.seeds.empty()) config_error(origin, "seeds", "need at least one seed");
  if (c.instance.source != "generate" && c.instance.source != "file") {
    config_error(origin, "instance.source", "must be 'generate' or 'file'");
  }
  if (c.instance.source == "file" && c.instance.path.empty()) config_error(origin, "instance.path", "missing");
  if (c.instance.source == "generate") {
    if (c.instance.n == 0) config_error(origin, "instance.n", "must be > 0");
    if (c.instance.delta == 0) config_error(origin, "instance.delta", "must be > 0");
  }
  if (!(c.epsilon >= 0.0 && c.epsilon <= 1.0)) config_error(origin, "epsilon", "must lie in [0,1]");
  if (c.K == 0) config_error(origin, "K", "must be >= 1");
  if (c.format != "csv" && c.format != "json") config_error(origin, "format", "must be csv or json");
  if (c.threads == 0) config_error(origin, "threads", "must be >= 1");
  if (!(c.thresholds.slack >= 0.0)) config_error(origin, "thresholds.slack", "must be >= 0");
  if (!(c.instance.churn >= 0.0 && c.instance.churn <= 1.0)) config_error(origin, "instance.churn", "must lie in [0,1]");
}

const std::vector<std::string>& record_columns() {
  static const std::vector<std::string> columns = [] {
    std::vector<std::string> out;
    const ordered_json sample = record_json(ExperimentRecord{});
    for (const auto& [key, value] : sample.items()) out.push_back(key);
    return out;
  }();
  return columns;
}

ExperimentRecord run_single(const ExperimentConfig& c, std::uint64_t seed) {
  ExperimentRecord r;
  r.config_hash = config_hash(c);
  r.seed = seed;
  r.algorithm = c.algorithm;
  r.epsilon = c.epsilon;
  r.K = c.K;
  const auto start = std::chrono::steady_clock::now();
  switch (c.algorithm) {
    case Algorithm::kBasic: run_basic_record(c, seed, r); break;
    case Algorithm::kWarmup: run_warmup_record(c, seed, r); break;
    case Algorithm::kGeneral: run_general_record(c, seed, r); break;
    case Algorithm::kDynamic: run_dynamic_record(c, seed, r); break;
    case Algorithm::kGreedy: run_greedy_record(c, seed, r); break;
  }
  if (c.timing) {
    r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return r;
}

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config) {
  validate_config(config);
  const std::size_t jobs = config.seeds.size();
  std::vector<ExperimentRecord> records(jobs);
  std::vector<std::exception_ptr> errors(jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t k = next++; k < jobs; k = next++) {
      try {
        records[k] = run_single(config, config.seeds[k]);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(config.threads, jobs));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::stable_sort(records.begin(), records.end(),
                   [](const ExperimentRecord& a, const ExperimentRecord& b) { return a.seed < b.seed; });
  return records;
}

void write_csv(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  const auto& cols = record_columns();
  for (std::size_t k = 0; k < cols.size(); ++k) out << (k ? "," : "") << cols[k];
  out << '\n';
  for (const ExperimentRecord& r : records) {
    const ordered_json j = record_json(r);
    std::size_t k = 0;
    for (const auto& [key, value] : j.items()) out << (k++ ? "," : "") << csv_cell(value);
    out << '\n';
  }
}

void write_json(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  ordered_json arr = ordered_json::array();
  for (const ExperimentRecord& r : records) arr.push_back(record_json(r));
  out << arr.dump(2) << '\n';
}

void write_update_reports(std::ostream& out, const std::vector<UpdateReport>& log) {
  for (const UpdateReport& u : log) {
    ordered_json j;
    j["t"] = u.t;
    j["op"] = u.update.op == UpdateOp::kInsert ? "+" : "-";
    j["u"] = u.update.u;
    j["v"] = u.update.v;
    j["recourse"] = u.recourse;
    j["dirty_per_round"] = u.dirty_per_round;
    j["simplecolor_events"] = u.simplecolor_events;
    j["colors_in_use"] = u.colors_in_use;
    out << j.dump() << '\n';
  }
}

void write_records(const ExperimentConfig& config, const std::vector<ExperimentRecord>& records) {
  auto emit = [&](std::ostream& out) {
    if (config.format == "json") {
      write_json(out, records);
    } else {
      write_csv(out, records);
    }
  };
  if (config.output.empty()) {
    emit(std::cout);
    return;
  }
  std::ofstream out(config.output);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + config.output);
  emit(out);
}

bool records_pass(const ExperimentConfig& config, const std::vector<ExperimentRecord>& records) {
  const double need = config.thresholds.event_pass;
  return std::all_of(records.begin(), records.end(), [&](const ExperimentRecord& r) {
    return r.proper && r.band_ok.value_or(true) && r.replay_ok.value_or(true) && r.bound_violations.value_or(0) == 0 &&
           r.events_palette_pass.value_or(1.0) >= need && r.events_c_degree_pass.value_or(1.0) >= need &&
           r.events_sampled_pass.value_or(1.0) >= need && r.events_failed_degree_ok.value_or(true);
  });
}

bool basic_band_ok(const Graph& g, const BasicResult& result, Color C) {
  for (EdgeId e : g.edge_ids()) {
    const Color final = result.coloring.at(e);
    const Color early = result.phase_one.partial.at(e);
    if (early != kNoColor) {
      if (early > C || final != early) return false;
    } else if (final <= C) {
      return false;
    }
  }
  return true;
}

bool warmup_band_ok(const WarmupMetrics& m) {
  return m.max_tentative_color <= m.phase1_colors &&
         (m.min_greedy_color == kNoColor || m.min_greedy_color > m.phase1_colors);
}

bool general_band_ok(const GeneralResult& result) {
  const GeneralMetrics& m = result.metrics;
  if (m.h_max_tentative_color > m.h_phase1_colors) return false;
  if (m.h_min_greedy_color != kNoColor && m.h_min_greedy_color <= m.h_phase1_colors) return false;
  for (std::size_t k = 0; k < result.colors.size(); ++k) {
    const Color c = result.colors[k];
    switch (result.step_of[k]) {
      case 1:
        if (c == kNoColor || c > m.delta1) return false;
        break;
      case 2:
        if (c <= m.delta1 || c > m.delta2) return false;
        break;
      default:
        if (c <= m.delta2) return false;
        break;
    }
  }
  return true;
}

}  // namespace nibble
