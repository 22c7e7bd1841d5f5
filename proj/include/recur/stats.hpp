#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "recur/generator.hpp"

namespace recur {

// Word -> semantic class (1..4), supplied externally as a TSV lexicon.
struct Lexicon {
  std::map<std::string, int> entries;
};

Lexicon read_lexicon_tsv(std::istream& in);

// Pearson correlation of (tau_j, tau_{j+p}) pairs.
double autocorrelation(const std::vector<double>& taus, std::size_t lag);

// One-sided exact binomial tail P(X >= n_success), X ~ Binomial(n_trials, 1/2),
// computed in log space.
double sign_test(std::uint64_t n_success, std::uint64_t n_trials);

struct WordBeta {
  std::string word;
  double beta = 0.0;
  double mean_tau = 0.0;
};

struct ClassRow {
  int cls = 0;
  std::size_t count = 0;
  double median = 0.0;
  double octile1 = 0.0;  // 12.5th percentile
  double octile2 = 0.0;  // 25th
  double octile6 = 0.0;  // 75th
  double octile7 = 0.0;  // 87.5th
  std::vector<double> betas;  // per-class values, for histograms
};

struct ClassSummary {
  std::vector<ClassRow> rows;                // ascending class
  std::vector<std::string> missing_words;    // absent from the lexicon
};

ClassSummary class_summary(const std::vector<WordBeta>& fits,
                           const Lexicon& lexicon);

struct RunningMedianPoint {
  double mean_tau = 0.0;  // window-center word's mean tau
  double median = 0.0;
  double octile1 = 0.0;
  double octile7 = 0.0;
};

// Words sorted by mean tau, sliding-window median plus 1st/7th octile band.
std::vector<RunningMedianPoint> running_median(
    const std::vector<WordBeta>& pairs, std::size_t window);

struct ImportanceShares {
  double share_class = 0.0;
  double share_logfreq = 0.0;
  double r2_full = 0.0;
};

// Averaging-over-orderings variance decomposition of beta onto the semantic
// class (categorical) and log mean recurrence time.
ImportanceShares relative_importance(const std::vector<double>& betas,
                                     const std::vector<int>& class_labels,
                                     const std::vector<double>& log_mean_taus);

// Empirical percentile with linear interpolation.
double percentile(std::vector<double> values, double q);

// Occurrence counts in consecutive non-overlapping windows tiling [1, N].
std::vector<std::uint64_t> counting_distribution(
    const std::vector<std::uint64_t>& positions, std::uint64_t window,
    std::uint64_t n_tokens);

// Monte Carlo counting distribution of the renewal model.
std::vector<std::uint64_t> model_counting(const SimulationSpec& spec,
                                          std::uint64_t window,
                                          std::uint64_t n_windows);

// Words sorted by ascending beta (burstiest first); ties by ascending
// mean tau, then lexicographically.
std::vector<WordBeta> rank_keywords(std::vector<WordBeta> fits,
                                    std::size_t top_k);

}  // namespace recur
