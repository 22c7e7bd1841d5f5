#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "recur/corpus.hpp"
#include "recur/fitting.hpp"
#include "recur/generator.hpp"
#include "recur/stats.hpp"

namespace recur {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit-status classes for the CLI.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AnalysisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::vector<std::string> inputs;
  std::string manifest;
  TokenizerRules rules;
  std::uint64_t min_count = 100;
  std::uint64_t min_tau = 1;
  FitMethod method = FitMethod::mle;
  unsigned bins_per_decade = kDefaultBinsPerDecade;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::string format = "csv";  // csv | jsonl
  unsigned threads = 0;        // 0 = hardware concurrency
};

// Loads the corpus named by the config (explicit inputs or manifest).
TokenStream load_corpus(const RunConfig& config);

struct AnalyzeRow {
  std::string word;
  std::uint64_t n_w = 0;
  double mean_tau = 0.0;
  double beta = 0.0;
  double a = 0.0;
  double r2_weibull = 0.0;
  double r2_exp2 = 0.0;
  double r2_za = 0.0;
  double hazard_slope = 0.0;
  bool has_weibull = false;
  bool has_exp2 = false;
  bool has_za = false;
  bool has_hazard_slope = false;
  std::string error;  // per-word failures, run continues
};

struct AnalyzeResult {
  std::uint64_t n_tokens = 0;
  std::vector<AnalyzeRow> rows;  // vocabulary order
};

// Full per-vocabulary fit table; parallel per word, deterministic row order.
AnalyzeResult cmd_analyze(const RunConfig& config);

struct WordDetail {
  RecurrenceSeries series;
  EmpiricalDistribution distribution;   // tau, f, F over distinct taus
  HazardEstimate hazard;
  ComparisonReport comparison;
  // Weibull-plot coordinates (log tau, log(-log F)); points with F = 1 are
  // excluded because the transform is undefined there.
  std::vector<double> wp_log_tau;
  std::vector<double> wp_loglog_f;
};

WordDetail cmd_word(const RunConfig& config, const std::string& word);

struct SimulateResult {
  SyntheticText text;
  std::string corpus_path;
  std::string truth_path;
};

// Reads a line-oriented simulation spec:
//   length N / seed S / filler LABEL / word LABEL BETA NU [WARMUP]
SyntheticTextSpec read_simulation_spec(const std::string& path);

SimulateResult cmd_simulate(const RunConfig& config,
                            const std::string& spec_path);

struct StatsResult {
  std::optional<ClassSummary> classes;
  std::vector<RunningMedianPoint> medians;
  std::optional<ImportanceShares> importance;
  std::uint64_t pair_wins = 0;
  std::uint64_t pair_total = 0;
  double pair_p_value = 1.0;
  std::vector<WordBeta> keywords;
  std::vector<std::string> warnings;
};

// fits_path is a table produced by cmd_analyze; lexicon and pair files are
// optional (analyses that need a missing input are skipped with a warning).
StatsResult cmd_stats(const RunConfig& config, const std::string& fits_path,
                      const std::string& lexicon_path,
                      const std::string& pairs_path,
                      std::size_t running_window = 21,
                      std::size_t top_keywords = 50);

// Reads back the per-word fit table written by cmd_analyze.
std::vector<AnalyzeRow> read_fit_table(const std::string& path);

}  // namespace recur
