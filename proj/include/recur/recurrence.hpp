#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "recur/corpus.hpp"

namespace recur {

// Occurrence positions and recurrence times of one word within a stream of
// length N. The gaps before the first and after the last occurrence are not
// recurrence times.
struct RecurrenceSeries {
  std::string word;
  std::vector<std::uint64_t> positions;  // 1-based, strictly increasing
  std::vector<std::uint64_t> taus;       // positions[j+1] - positions[j]
  std::uint64_t n_tokens = 0;            // corpus length N
  std::uint64_t n_occurrences = 0;       // N_w
  double mean_tau = 0.0;                 // N / N_w
  double rate = 0.0;                     // nu = N_w / N
};

// Empirical density f and survival F over the distinct observed values (or
// log-bin centers). Survival convention: F(tau) = P(recurrence >= tau), so
// F equals 1 at the smallest support point and never reaches 0.
struct EmpiricalDistribution {
  std::vector<double> support;
  std::vector<double> density;
  std::vector<double> survival;
  std::size_t sample_count = 0;
  std::vector<double> bin_widths;  // empty in unbinned mode
};

// Log-binned hazard estimate: per bin, events / summed risk-set sizes at the
// distinct observed times inside the bin (the discrete f/F ratio aggregated
// within bins).
struct HazardEstimate {
  std::vector<double> t_values;  // bin centers
  std::vector<double> m_values;  // in (0, 1]
  unsigned bins_per_decade = 0;
};

RecurrenceSeries extract_recurrences(const TokenStream& stream,
                                     const std::string& word);

// Builds a series directly from known occurrence positions.
RecurrenceSeries series_from_positions(std::string word,
                                       std::vector<std::uint64_t> positions,
                                       std::uint64_t n_tokens);

EmpiricalDistribution empirical_survival(const RecurrenceSeries& series);

// Survival/density over distinct values of an arbitrary positive sample
// (real-valued samples from a model sampler work too).
EmpiricalDistribution empirical_survival_of(const std::vector<double>& samples);

EmpiricalDistribution log_binned_density(const RecurrenceSeries& series,
                                         unsigned bins_per_decade);
EmpiricalDistribution log_binned_density_of(const std::vector<double>& samples,
                                            unsigned bins_per_decade);

HazardEstimate empirical_hazard(const RecurrenceSeries& series,
                                unsigned bins_per_decade);
HazardEstimate empirical_hazard_of(const std::vector<double>& samples,
                                   unsigned bins_per_decade);

void write_distribution_csv(const EmpiricalDistribution& dist,
                            std::ostream& out);
void write_hazard_csv(const HazardEstimate& hazard, std::ostream& out);

inline constexpr unsigned kDefaultBinsPerDecade = 10;

}  // namespace recur
