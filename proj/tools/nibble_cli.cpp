// nibble: generators, runs, verification and sweeps.
//
// Exit codes: 0 success, 1 verification failure, 2 config/usage error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nibble/baselines.hpp"
#include "nibble/equivalence.hpp"
#include "nibble/experiment.hpp"
#include "nibble/generators.hpp"
#include "nibble/graph_io.hpp"
#include "nibble/random_order.hpp"
#include "nibble/replay.hpp"
#include "nibble/studies.hpp"

namespace {

using namespace nibble;

constexpr int kExitOk = 0;
constexpr int kExitVerify = 1;
constexpr int kExitConfig = 2;

// "1,2,5-9" -> {1,2,5,6,7,8,9}
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    try {
      const auto dash = item.find('-');
      if (dash == std::string::npos) {
        out.push_back(std::stoull(item));
        continue;
      }
      const std::uint64_t lo = std::stoull(item.substr(0, dash));
      const std::uint64_t hi = std::stoull(item.substr(dash + 1));
      if (hi < lo || hi - lo > 1'000'000) throw Error(ErrorCode::kConfig, "bad seed range '" + item + "'");
      for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kConfig, "bad seed list '" + text + "'");
    }
  }
  if (out.empty()) throw Error(ErrorCode::kConfig, "empty seed list");
  return out;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kConfig, "bad number '" + item + "'");
    }
  }
  return out;
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw Error(ErrorCode::kIo, "cannot write " + path);
  return file;
}

struct Common {
  std::size_t n = 0;
  std::size_t delta = 0;
  double eps = 0.1;
  unsigned K = kDefaultK;
  unsigned t = 0;
  std::uint64_t seed = 1;
  std::string seeds;
  std::string input;
  std::string output;
  std::string format = "csv";
  bool strict = false;
  std::string gadget = "on";
  double slack = 0.1;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--n", c.n, "Number of nodes");
  app->add_option("--delta", c.delta, "Maximum degree");
  app->add_option("--eps", c.eps, "Epsilon");
  app->add_option("--K", c.K, "Envelope constant K");
  app->add_option("--seed", c.seed, "Seed");
  app->add_option("--seeds", c.seeds, "Seed list, e.g. 1,2,10-20");
  app->add_option("--output", c.output, "Output path (default stdout)");
}

std::vector<std::uint64_t> seed_list(const Common& c) {
  return c.seeds.empty() ? std::vector<std::uint64_t>{c.seed} : parse_seeds(c.seeds);
}

// ---------------------------------------------------------------------------
// gen

int gen_graph(const Common& c, double degree_slack) {
  const Graph g = gen_near_regular(c.n, c.delta, degree_slack, c.seed);
  std::vector<Endpoints> edges;
  for (EdgeId e : g.edge_ids()) edges.push_back(g.endpoints(e));
  std::ofstream file;
  write_edge_list(open_output(c.output, file), {c.n, c.delta}, edges);
  return kExitOk;
}

int gen_stream(const Common& c) {
  if (c.input.empty()) throw Error(ErrorCode::kConfig, "gen stream needs --input");
  const EdgeListFile in = read_edge_list(c.input);
  const std::size_t n = in.header.node_count;
  const Graph g = graph_from_edges(n, in.header.max_degree > 0 ? in.header.max_degree : n, in.edges);
  const EdgeStream stream = gen_random_order_stream(g, c.seed);
  std::ofstream file;
  write_edge_list(open_output(c.output, file), in.header, stream);
  return kExitOk;
}

int gen_updates(const Common& c, std::size_t length, double churn) {
  const UpdateStream ups = gen_update_sequence(c.n, c.delta, length, churn, c.seed);
  std::ofstream file;
  write_update_stream(open_output(c.output, file), {c.n, c.delta}, ups);
  return kExitOk;
}

int gen_lower_bound(const Common& c, std::size_t copies, std::size_t budget) {
  LowerBoundParams p;
  p.delta = c.delta == 0 ? 2 : c.delta;
  p.copies = copies;
  p.node_budget = budget;
  p.seed = c.seed;
  const LowerBoundInstance inst = gen_lower_bound_instance(p);
  std::ofstream file;
  std::ostream& out = open_output(c.output, file);
  out << "# beta=" << inst.beta << " copies=" << inst.copies << '\n';
  write_edge_list(out, {inst.graph.node_count(), p.delta}, inst.stream);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// run

struct RunFlags {
  std::string algorithm;
  std::string config;
  std::size_t updates = 0;
  double churn = 0.5;
  bool timing = false;
  unsigned threads = 1;
  bool replay = false;
  bool events = false;
  bool every_update = false;
  std::string update_log;
};

int run(CLI::App* app, const Common& c, const RunFlags& f) {
  ExperimentConfig cfg = f.config.empty() ? ExperimentConfig{} : load_config(f.config);
  auto given = [&](const char* name) { return app->count(name) > 0; };
  if (f.config.empty() || !f.algorithm.empty()) cfg.algorithm = parse_algorithm(f.algorithm);
  if (given("--input")) {
    cfg.instance.source = "file";
    cfg.instance.path = c.input;
  }
  if (given("--n")) cfg.instance.n = c.n;
  if (given("--delta")) cfg.instance.delta = c.delta;
  if (given("--degree-slack")) cfg.instance.slack = app->get_option("--degree-slack")->as<double>();
  if (given("--updates")) cfg.instance.updates = f.updates;
  if (given("--churn")) cfg.instance.churn = f.churn;
  if (given("--eps")) cfg.epsilon = c.eps;
  if (given("--K")) cfg.K = c.K;
  if (given("--t")) cfg.t_eps = c.t;
  if (given("--seed") || given("--seeds")) cfg.seeds = seed_list(c);
  if (given("--output")) cfg.output = c.output;
  if (given("--format")) cfg.format = c.format;
  if (given("--strict-regularity")) cfg.strict_regularity = c.strict;
  if (given("--gadget")) cfg.gadget = c.gadget == "on";
  if (given("--slack")) cfg.thresholds.slack = c.slack;
  if (given("--timing")) cfg.timing = f.timing;
  if (given("--threads")) cfg.threads = f.threads;
  if (given("--replay")) cfg.verify.replay = f.replay;
  if (given("--events")) cfg.verify.events = f.events;
  if (given("--every-update")) cfg.verify.every_update = f.every_update;
  validate_config(cfg);

  const std::vector<ExperimentRecord> records = run_experiment(cfg);
  write_records(cfg, records);
  if (!f.update_log.empty()) {
    std::ofstream log(f.update_log);
    if (!log) throw Error(ErrorCode::kIo, "cannot write " + f.update_log);
    for (const ExperimentRecord& r : records) write_update_reports(log, r.update_log);
  }
  return records_pass(cfg, records) ? kExitOk : kExitVerify;
}

// ---------------------------------------------------------------------------
// verify

int verify_events_cmd(const Common& c, unsigned rounds, double gamma_scale, std::size_t budget, bool full,
                      double need) {
  EventStudyConfig cfg;
  cfg.n = c.n;
  cfg.delta = c.delta;
  cfg.epsilon = c.eps;
  cfg.K = c.K;
  cfg.rounds = rounds;
  cfg.seeds = seed_list(c);
  cfg.slack = c.slack;
  cfg.gamma_scale = gamma_scale;
  cfg.budget = budget;
  cfg.full_sweep = full;
  const EventStudy study = run_event_study(cfg);
  std::ofstream file;
  std::ostream& out = open_output(c.output, file);
  out << "round,center,gamma,palette_pass,c_degree_pass,node_sampled_pass,color_sampled_pass,"
         "palette_min,palette_max,failed_max_degree,failed_degree_bound\n";
  for (const RoundEventReport& r : study.pooled.rounds) {
    out << r.round << ',' << r.center << ',' << r.gamma << ',' << r.palette.pass_fraction() << ','
        << r.c_degree.pass_fraction() << ',' << r.node_sampled.pass_fraction() << ','
        << r.color_sampled.pass_fraction() << ',' << r.palette.observed_min << ',' << r.palette.observed_max << ','
        << r.failed_max_degree << ',' << r.failed_degree_bound << '\n';
  }
  const EventReport& p = study.pooled;
  const bool ok = p.min_palette_fraction() >= need && p.min_c_degree_fraction() >= need &&
                  p.min_sampled_fraction() >= need && p.failed_degrees_ok();
  return ok ? kExitOk : kExitVerify;
}

int verify_replay_cmd(const Common& c, const std::string& algorithm) {
  const Algorithm algo = parse_algorithm(algorithm);
  bool ok = true;
  for (std::uint64_t seed : seed_list(c)) {
    const Graph g = gen_near_regular(c.n, c.delta, 0.0, seed);
    const EdgeStream stream = gen_random_order_stream(g, seed + 1);
    DecisionLog log;
    Rng rng(seed);
    switch (algo) {
      case Algorithm::kGreedy: greedy_online(stream, c.n, &log); break;
      case Algorithm::kWarmup: run_warmup(stream, c.n, c.delta, stream.size(), c.eps, c.K, rng, &log); break;
      case Algorithm::kGeneral: run_general(stream, c.n, c.delta, c.eps, c.K, rng, &log); break;
      default: throw Error(ErrorCode::kConfig, "replay applies to greedy, warmup and general");
    }
    const ReplayVerdict v = replay_validate(log, stream);
    std::cout << "seed " << seed << ": " << (v.valid ? "valid" : "invalid: " + v.reason) << '\n';
    ok = ok && v.valid;
  }
  return ok ? kExitOk : kExitVerify;
}

int verify_distribution_cmd(const Common& c, std::size_t trials, double tv) {
  const EquivalenceReport rep = compare_dynamic_static(toy_scenario(), trials, c.seed);
  std::cout << "edge,tv_dynamic_static,tv_dynamic_exact\n";
  for (std::size_t k = 0; k < rep.edges; ++k) {
    std::cout << k << ',' << rep.edge_tv_dynamic_static[k] << ',' << rep.edge_tv_dynamic_exact[k] << '\n';
  }
  std::cout << "# max per-edge tv " << rep.max_edge_tv << "; joint tv dynamic/static "
            << rep.joint_tv_dynamic_static << ", dynamic/exact " << rep.joint_tv_dynamic_exact << ", static/exact "
            << rep.joint_tv_static_exact << '\n';
  const bool ok = rep.max_edge_tv < tv && rep.joint_tv_dynamic_static < tv && rep.joint_tv_dynamic_exact < tv;
  return ok ? kExitOk : kExitVerify;
}

// ---------------------------------------------------------------------------
// bench

int bench_recourse(const Common& c, const std::string& ns, std::size_t updates) {
  std::ofstream file;
  std::ostream& out = open_output(c.output, file);
  out << "n,delta,epsilon,K,updates,seeds,mean_recourse,mean_total_recourse,bound_violations\n";
  for (double nd : parse_doubles(ns)) {
    RecourseStudyConfig cfg;
    cfg.n = static_cast<std::size_t>(nd);
    cfg.delta = c.delta;
    cfg.epsilon = c.eps;
    cfg.K = c.K;
    cfg.updates = updates;
    cfg.seeds = seed_list(c);
    cfg.gadget = c.gadget == "on";
    const RecourseStudy s = run_recourse_study(cfg);
    out << cfg.n << ',' << cfg.delta << ',' << cfg.epsilon << ',' << cfg.K << ',' << updates << ','
        << cfg.seeds.size() << ',' << s.mean_recourse << ',' << s.mean_total_recourse << ',' << s.bound_violations
        << '\n';
  }
  return kExitOk;
}

int bench_colors(const Common& c, const std::string& eps_list, const std::string& algorithm) {
  std::ofstream file;
  std::ostream& out = open_output(c.output, file);
  out << "algorithm,n,delta,epsilon,K,seed,colors_used,greedy_colors,ratio_to_delta\n";
  for (double eps : parse_doubles(eps_list)) {
    ExperimentConfig cfg;
    cfg.algorithm = parse_algorithm(algorithm);
    cfg.instance.n = c.n;
    cfg.instance.delta = c.delta;
    cfg.epsilon = eps;
    cfg.K = c.K;
    cfg.seeds = seed_list(c);
    for (const ExperimentRecord& r : run_experiment(cfg)) {
      out << algorithm << ',' << r.n << ',' << r.delta << ',' << eps << ',' << r.K << ',' << r.seed << ','
          << r.colors_used << ',';
      if (r.greedy_colors) out << *r.greedy_colors;
      out << ',' << static_cast<double>(r.colors_used) / static_cast<double>(r.delta) << '\n';
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nibble-method edge coloring"};
  app.require_subcommand(1);
  Common c;

  auto* gen = app.add_subcommand("gen", "Generate graphs, streams, update sequences, lower-bound instances");
  gen->require_subcommand(1);
  double degree_slack = 0.0;
  std::size_t length = 1000;
  double churn = 0.5;
  std::size_t copies = 0;
  std::size_t budget = 10'000;
  auto* gen_g = gen->add_subcommand("graph", "Near-regular random graph");
  add_common(gen_g, c);
  gen_g->add_option("--degree-slack", degree_slack, "Degrees lie in [delta(1-slack), delta]");
  auto* gen_s = gen->add_subcommand("stream", "Random arrival order of a graph file");
  add_common(gen_s, c);
  gen_s->add_option("--input", c.input, "Edge list")->required();
  auto* gen_u = gen->add_subcommand("updates", "Oblivious update sequence");
  add_common(gen_u, c);
  gen_u->add_option("--length", length, "Number of updates");
  gen_u->add_option("--churn", churn, "Deletion probability after the insertion phase");
  auto* gen_l = gen->add_subcommand("lower-bound", "Star-and-hub instance defeating greedy");
  add_common(gen_l, c);
  gen_l->add_option("--copies", copies, "Copies (0 = fill the budget)");
  gen_l->add_option("--budget", budget, "Node budget");

  auto* run_cmd = app.add_subcommand("run", "Run an algorithm over one or more seeds");
  RunFlags rf;
  add_common(run_cmd, c);
  run_cmd->add_option("algorithm", rf.algorithm, "basic|warmup|general|dynamic|greedy");
  run_cmd->add_option("--config", rf.config, "JSON experiment config; flags override it");
  run_cmd->add_option("--t", c.t, "Round count override (0 derives it)");
  run_cmd->add_option("--input", c.input, "Edge list / stream / update file");
  run_cmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  run_cmd->add_flag("--strict-regularity", c.strict, "Reject inputs outside [(1-eps^2)delta, (1+eps^2)delta]");
  run_cmd->add_option("--gadget", c.gadget, "on or off")->check(CLI::IsMember({"on", "off"}));
  run_cmd->add_option("--slack", c.slack, "Relative event slack");
  run_cmd->add_option("--degree-slack", degree_slack, "Generated degrees lie in [delta(1-slack), delta]");
  run_cmd->add_option("--updates", rf.updates, "Dynamic: number of updates");
  run_cmd->add_option("--churn", rf.churn, "Dynamic: deletion probability");
  run_cmd->add_flag("--timing", rf.timing, "Fill runtime_ms");
  run_cmd->add_option("--threads", rf.threads, "Worker threads");
  run_cmd->add_flag("--replay", rf.replay, "Validate online decision logs");
  run_cmd->add_flag("--events", rf.events, "Basic: check the concentration envelopes");
  run_cmd->add_flag("--every-update", rf.every_update, "Dynamic: verify after every update");
  run_cmd->add_option("--update-log", rf.update_log, "Dynamic: JSON lines per update");

  auto* verify = app.add_subcommand("verify", "Statistical and structural checks");
  verify->require_subcommand(1);
  unsigned rounds = 3;
  double gamma_scale = 1.0;
  std::size_t event_budget = 10'000;
  bool full_sweep = false;
  double need = 0.99;
  auto* v_events = verify->add_subcommand("events", "Concentration envelopes of phase one");
  add_common(v_events, c);
  v_events->add_option("--slack", c.slack, "Relative slack");
  v_events->add_option("--rounds", rounds, "Rounds to check");
  v_events->add_option("--gamma-scale", gamma_scale, "Scale every gamma_i (negative controls)");
  v_events->add_option("--budget", event_budget, "Samples per quantity per round");
  v_events->add_flag("--full-sweep", full_sweep, "Measure everything");
  v_events->add_option("--pass", need, "Required pass fraction");
  std::string replay_algo = "warmup";
  auto* v_replay = verify->add_subcommand("replay", "Online decision-log validation");
  add_common(v_replay, c);
  v_replay->add_option("algorithm", replay_algo, "greedy|warmup|general");
  std::size_t trials = 100'000;
  double tv = 0.05;
  auto* v_dist = verify->add_subcommand("distribution", "Dynamic vs static outcome distribution on the toy script");
  add_common(v_dist, c);
  v_dist->add_option("--trials", trials, "Trials per side");
  v_dist->add_option("--tv", tv, "TV threshold");

  auto* bench = app.add_subcommand("bench", "Parameter sweeps with plot-ready CSV");
  bench->require_subcommand(1);
  std::string ns = "500,1000,2000";
  std::size_t updates = 10'000;
  auto* b_rec = bench->add_subcommand("recourse-vs-n", "Mean recourse over n");
  add_common(b_rec, c);
  b_rec->add_option("--ns", ns, "Comma-separated n values");
  b_rec->add_option("--updates", updates, "Updates per run");
  b_rec->add_option("--gadget", c.gadget, "on or off")->check(CLI::IsMember({"on", "off"}));
  std::string eps_list = "0.05,0.1,0.2";
  std::string bench_algo = "warmup";
  auto* b_col = bench->add_subcommand("colors-vs-epsilon", "Colors used over epsilon");
  add_common(b_col, c);
  b_col->add_option("--eps-list", eps_list, "Comma-separated epsilons");
  b_col->add_option("--algorithm", bench_algo, "basic|warmup|general");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (gen_g->parsed()) return gen_graph(c, degree_slack);
    if (gen_s->parsed()) return gen_stream(c);
    if (gen_u->parsed()) return gen_updates(c, length, churn);
    if (gen_l->parsed()) return gen_lower_bound(c, copies, budget);
    if (run_cmd->parsed()) return run(run_cmd, c, rf);
    if (v_events->parsed()) return verify_events_cmd(c, rounds, gamma_scale, event_budget, full_sweep, need);
    if (v_replay->parsed()) return verify_replay_cmd(c, replay_algo);
    if (v_dist->parsed()) return verify_distribution_cmd(c, trials, tv);
    if (b_rec->parsed()) return bench_recourse(c, ns, updates);
    if (b_col->parsed()) return bench_colors(c, eps_list, bench_algo);
  } catch (const Error& e) {
    std::cerr << "nibble: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "nibble: internal error: " << e.what() << '\n';
    return kExitVerify;
  }
  return kExitConfig;
}
