#include "recur/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace recur {

namespace {

// Distinct ascending values with counts and risk-set sizes
// S(v) = #{samples >= v}.
struct DistinctTable {
  std::vector<double> values;
  std::vector<std::size_t> counts;
  std::vector<std::size_t> at_risk;
  std::size_t total = 0;
};

DistinctTable distinct_table(std::vector<double> samples) {
  if (samples.empty())
    throw std::runtime_error("insufficient occurrences: no recurrence times");
  std::sort(samples.begin(), samples.end());
  DistinctTable t;
  t.total = samples.size();
  std::size_t i = 0;
  while (i < samples.size()) {
    std::size_t j = i;
    while (j < samples.size() && samples[j] == samples[i]) ++j;
    t.values.push_back(samples[i]);
    t.counts.push_back(j - i);
    t.at_risk.push_back(samples.size() - i);
    i = j;
  }
  return t;
}

std::vector<double> as_doubles(const std::vector<std::uint64_t>& v) {
  return std::vector<double>(v.begin(), v.end());
}

// Geometric bin edges 10^(k / bpd) covering [1, max_value].
std::vector<double> log_bin_edges(double max_value, unsigned bpd) {
  if (bpd == 0) throw std::invalid_argument("bins_per_decade must be >= 1");
  std::vector<double> edges;
  int k = 0;
  double edge = 1.0;
  while (true) {
    edges.push_back(edge);
    if (edge > max_value) break;
    ++k;
    edge = std::pow(10.0, static_cast<double>(k) / bpd);
  }
  return edges;
}

EmpiricalDistribution survival_impl(std::vector<double> samples) {
  DistinctTable t = distinct_table(std::move(samples));
  EmpiricalDistribution dist;
  dist.sample_count = t.total;
  double n = static_cast<double>(t.total);
  dist.support = t.values;
  dist.density.reserve(t.values.size());
  dist.survival.reserve(t.values.size());
  for (std::size_t i = 0; i < t.values.size(); ++i) {
    dist.density.push_back(static_cast<double>(t.counts[i]) / n);
    dist.survival.push_back(static_cast<double>(t.at_risk[i]) / n);
  }
  return dist;
}

EmpiricalDistribution log_binned_impl(std::vector<double> samples,
                                      unsigned bpd) {
  if (samples.empty())
    throw std::runtime_error("insufficient occurrences: no recurrence times");
  double max_value = *std::max_element(samples.begin(), samples.end());
  std::vector<double> edges = log_bin_edges(max_value, bpd);
  std::vector<std::size_t> counts(edges.size() - 1, 0);
  for (double v : samples) {
    auto it = std::upper_bound(edges.begin(), edges.end(), v);
    if (it == edges.begin() || it == edges.end()) continue;  // v < 1
    counts[static_cast<std::size_t>(it - edges.begin()) - 1]++;
  }
  EmpiricalDistribution dist;
  dist.sample_count = samples.size();
  double n = static_cast<double>(samples.size());
  for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
    if (counts[b] == 0) continue;
    double lo = edges[b], hi = edges[b + 1];
    double width = hi - lo;
    dist.support.push_back(std::sqrt(lo * hi));
    dist.density.push_back(static_cast<double>(counts[b]) / (width * n));
    dist.bin_widths.push_back(width);
  }
  // Survival at each kept bin's lower edge.
  std::vector<double> sorted(samples);
  std::sort(sorted.begin(), sorted.end());
  std::size_t bi = 0;
  for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
    if (counts[b] == 0) continue;
    auto it = std::lower_bound(sorted.begin(), sorted.end(), edges[b]);
    dist.survival.push_back(
        static_cast<double>(sorted.end() - it) / n);
    ++bi;
  }
  return dist;
}

// Life-table hazard: per bin, events divided by the summed risk-set sizes
// S(t) = #{tau_j >= t} over the integer clock times t inside the bin.
HazardEstimate hazard_impl(std::vector<double> samples, unsigned bpd) {
  if (samples.empty())
    throw std::runtime_error("insufficient occurrences: no recurrence times");
  std::sort(samples.begin(), samples.end());
  double max_value = samples.back();
  std::vector<double> edges = log_bin_edges(max_value, bpd);

  // Sum of S(t) for integer t in [a, b]: each interval tau_j contributes one
  // unit of exposure at every t <= floor(tau_j).
  std::vector<double> floors(samples.size());
  std::vector<double> floor_prefix(samples.size() + 1, 0.0);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    floors[i] = std::floor(samples[i]);
    floor_prefix[i + 1] = floor_prefix[i] + floors[i];
  }
  std::sort(floors.begin(), floors.end());
  auto exposure_in = [&](double a, double b) {
    // Intervals with floor(tau_j) >= a; those capped at b give (b - a + 1),
    // the rest give floor(tau_j) - a + 1.
    auto lo_it = std::lower_bound(floors.begin(), floors.end(), a);
    auto hi_it = std::lower_bound(floors.begin(), floors.end(), b);
    std::size_t i_lo = static_cast<std::size_t>(lo_it - floors.begin());
    std::size_t i_hi = static_cast<std::size_t>(hi_it - floors.begin());
    double full = static_cast<double>(floors.size() - i_hi) * (b - a + 1.0);
    double partial = (floor_prefix[i_hi] - floor_prefix[i_lo]) -
                     static_cast<double>(i_hi - i_lo) * (a - 1.0);
    return full + partial;
  };

  HazardEstimate hz;
  hz.bins_per_decade = bpd;
  std::size_t i = 0;
  for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
    double lo = edges[b], hi = edges[b + 1];
    std::size_t events = 0;
    while (i < samples.size() && samples[i] < hi) {
      if (samples[i] >= lo) ++events;
      ++i;
    }
    if (events == 0) continue;
    double t_first = std::max(1.0, std::ceil(lo));
    double t_last = std::ceil(hi) - 1.0;  // last integer strictly below hi
    if (t_last < t_first) t_last = t_first;
    double exposure = exposure_in(t_first, t_last);
    if (exposure <= 0.0) continue;
    hz.t_values.push_back(std::sqrt(lo * hi));
    hz.m_values.push_back(
        std::min(1.0, static_cast<double>(events) / exposure));
  }
  return hz;
}

}  // namespace

RecurrenceSeries extract_recurrences(const TokenStream& stream,
                                     const std::string& word) {
  std::vector<std::uint64_t> positions;
  for (std::size_t j = 0; j < stream.tokens.size(); ++j)
    if (stream.tokens[j] == word) positions.push_back(j + 1);
  if (positions.empty())
    throw std::runtime_error("word not found: " + word);
  return series_from_positions(word, std::move(positions),
                               stream.tokens.size());
}

RecurrenceSeries series_from_positions(std::string word,
                                       std::vector<std::uint64_t> positions,
                                       std::uint64_t n_tokens) {
  for (std::size_t j = 1; j < positions.size(); ++j)
    if (positions[j] <= positions[j - 1])
      throw std::invalid_argument("positions must be strictly increasing");
  RecurrenceSeries s;
  s.word = std::move(word);
  s.n_tokens = n_tokens;
  s.n_occurrences = positions.size();
  s.taus.reserve(positions.size() > 0 ? positions.size() - 1 : 0);
  for (std::size_t j = 1; j < positions.size(); ++j)
    s.taus.push_back(positions[j] - positions[j - 1]);
  s.positions = std::move(positions);
  if (n_tokens > 0 && s.n_occurrences > 0) {
    s.mean_tau = static_cast<double>(n_tokens) /
                 static_cast<double>(s.n_occurrences);
    s.rate = static_cast<double>(s.n_occurrences) /
             static_cast<double>(n_tokens);
  }
  return s;
}

EmpiricalDistribution empirical_survival(const RecurrenceSeries& series) {
  return survival_impl(as_doubles(series.taus));
}

EmpiricalDistribution empirical_survival_of(
    const std::vector<double>& samples) {
  return survival_impl(samples);
}

EmpiricalDistribution log_binned_density(const RecurrenceSeries& series,
                                         unsigned bins_per_decade) {
  return log_binned_impl(as_doubles(series.taus), bins_per_decade);
}

EmpiricalDistribution log_binned_density_of(const std::vector<double>& samples,
                                            unsigned bins_per_decade) {
  return log_binned_impl(samples, bins_per_decade);
}

HazardEstimate empirical_hazard(const RecurrenceSeries& series,
                                unsigned bins_per_decade) {
  return hazard_impl(as_doubles(series.taus), bins_per_decade);
}

HazardEstimate empirical_hazard_of(const std::vector<double>& samples,
                                   unsigned bins_per_decade) {
  return hazard_impl(samples, bins_per_decade);
}

void write_distribution_csv(const EmpiricalDistribution& dist,
                            std::ostream& out) {
  out << "tau,f,F\n";
  for (std::size_t i = 0; i < dist.support.size(); ++i)
    out << dist.support[i] << ',' << dist.density[i] << ','
        << dist.survival[i] << '\n';
}

void write_hazard_csv(const HazardEstimate& hazard, std::ostream& out) {
  out << "t,m\n";
  for (std::size_t i = 0; i < hazard.t_values.size(); ++i)
    out << hazard.t_values[i] << ',' << hazard.m_values[i] << '\n';
}

}  // namespace recur
