#pragma once

// Experiment orchestration: one config, one record per seed.
//
// CSV schema (column order is fixed; see record_columns()):
//   config_hash, seed, algorithm, n, delta, m, epsilon, K, t_eps, C,
//   colors_used, max_color, proper, band_ok, phase_one_colored,
//   uncolored_max_degree, greedy_colors, tentative_band_edges,
//   greedy_band_edges, T, m_prime, m_prime_exceeds_m, delta1, delta2, delta3,
//   dummy_edges, updates, mean_recourse, max_recourse, mean_dummy_recourse,
//   bound_violations, replay_ok, events_palette_pass, events_c_degree_pass,
//   events_sampled_pass, events_failed_degree_ok, runtime_ms
// Fields that do not apply to the algorithm are empty (null in JSON).
// runtime_ms is filled only when timing is requested, so default output is
// reproducible byte for byte.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nibble/basic.hpp"
#include "nibble/dynamic.hpp"
#include "nibble/random_order.hpp"

namespace nibble {

enum class Algorithm { kBasic, kWarmup, kGeneral, kDynamic, kGreedy };

std::string_view to_string(Algorithm a);
/// Throws Error{kConfig} for an unknown name.
Algorithm parse_algorithm(std::string_view name);

struct InstanceConfig {
  /// "generate" or "file".
  std::string source = "generate";
  std::string path;
  std::size_t n = 0;
  std::size_t delta = 0;
  double slack = 0.0;
  /// Dynamic only: sequence length and deletion probability.
  std::size_t updates = 0;
  double churn = 0.5;
  /// Fixed instance seed; unset draws a fresh instance per run seed.
  std::optional<std::uint64_t> seed;
  /// File streams: shuffle the edge list per run seed instead of using file order.
  bool shuffle = false;
};

struct VerifyConfig {
  bool events = false;
  bool replay = false;
  bool every_update = false;
  std::size_t event_budget = 10'000;
  bool full_sweep = false;
  /// Rounds checked by the event verifier (0 = all).
  unsigned event_rounds = 0;
};

struct Thresholds {
  double slack = 0.1;
  double tv = 0.05;
  double chi2_alpha = 0.01;
  double event_pass = 0.99;
};

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::kBasic;
  InstanceConfig instance;
  double epsilon = 0.1;
  unsigned K = kDefaultK;
  /// 0 derives t from (eps, K).
  unsigned t_eps = 0;
  std::vector<std::uint64_t> seeds{1};
  bool gadget = true;
  bool strict_regularity = false;
  VerifyConfig verify;
  Thresholds thresholds;
  std::string output;
  std::string format = "csv";
  bool timing = false;
  unsigned threads = 1;
};

/// Throws Error{kConfig} naming the offending field.
ExperimentConfig config_from_json(const std::string& text, const std::string& origin = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const ExperimentConfig& config);

/// FNV-1a over the canonical JSON of the fields that affect results
/// (output, format, timing and threads excluded), as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

/// Throws Error{kConfig} for inconsistent settings.
void validate_config(const ExperimentConfig& config);

struct ExperimentRecord {
  std::string config_hash;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::kBasic;
  std::size_t n = 0;
  std::size_t delta = 0;
  std::size_t m = 0;
  double epsilon = 0.0;
  unsigned K = 0;
  std::optional<unsigned> t_eps;
  std::optional<std::size_t> C;
  std::size_t colors_used = 0;
  Color max_color = kNoColor;
  bool proper = false;
  std::optional<bool> band_ok;
  std::optional<std::size_t> phase_one_colored;
  std::optional<std::size_t> uncolored_max_degree;
  std::optional<std::size_t> greedy_colors;
  std::optional<std::size_t> tentative_band_edges;
  std::optional<std::size_t> greedy_band_edges;
  std::optional<std::size_t> T;
  std::optional<std::size_t> m_prime;
  std::optional<bool> m_prime_exceeds_m;
  std::optional<std::size_t> delta1;
  std::optional<std::size_t> delta2;
  std::optional<std::size_t> delta3;
  std::optional<std::uint64_t> dummy_edges;
  std::optional<std::size_t> updates;
  std::optional<double> mean_recourse;
  std::optional<std::size_t> max_recourse;
  std::optional<double> mean_dummy_recourse;
  std::optional<std::size_t> bound_violations;
  std::optional<bool> replay_ok;
  std::optional<double> events_palette_pass;
  std::optional<double> events_c_degree_pass;
  std::optional<double> events_sampled_pass;
  std::optional<bool> events_failed_degree_ok;
  std::optional<double> runtime_ms;
  /// Dynamic runs: one report per real update (not part of the CSV).
  std::vector<UpdateReport> update_log;
};

const std::vector<std::string>& record_columns();

/// One record per seed, ordered by seed.
std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config);
ExperimentRecord run_single(const ExperimentConfig& config, std::uint64_t seed);

void write_csv(std::ostream& out, const std::vector<ExperimentRecord>& records);
void write_json(std::ostream& out, const std::vector<ExperimentRecord>& records);
/// One JSON object per line: {t, op, recourse, dirty_per_round, simplecolor_events, colors_in_use}.
void write_update_reports(std::ostream& out, const std::vector<UpdateReport>& log);

/// Writes to config.output (stdout when empty) in config.format.
void write_records(const ExperimentConfig& config, const std::vector<ExperimentRecord>& records);

/// True when no record reports a failed check (properness, bands, replay,
/// events below thresholds.event_pass, recourse bound).
bool records_pass(const ExperimentConfig& config, const std::vector<ExperimentRecord>& records);

// Band checks, shared with the tests.
bool basic_band_ok(const Graph& g, const BasicResult& result, Color C);
bool warmup_band_ok(const WarmupMetrics& metrics);
bool general_band_ok(const GeneralResult& result);

}  // namespace nibble
