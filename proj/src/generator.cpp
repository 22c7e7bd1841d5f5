#include "recur/generator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace recur {

std::vector<double> sample_recurrence_inverse(const WeibullModel& model,
                                              std::size_t n,
                                              std::uint64_t seed,
                                              bool ceil_to_int) {
  if (n == 0) throw std::invalid_argument("sample count must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> taus;
  taus.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double u;
    do {
      u = unif(rng);
    } while (u == 0.0);
    double tau = std::pow(-std::log(u) / model.a, 1.0 / model.beta);
    taus.push_back(ceil_to_int ? std::ceil(tau) : tau);
  }
  return taus;
}

namespace {

// Power-law hazard memoized over the integer clock.
class HazardTable {
 public:
  HazardTable(double beta, double nu) : beta_(beta) {
    a_ = weibull_from_rate(beta, nu).a;
  }

  double operator()(std::uint64_t i) {
    if (i == 0) throw std::logic_error("hazard clock starts at 1");
    while (cache_.size() < i) {
      double t = static_cast<double>(cache_.size() + 1);
      cache_.push_back(std::min(1.0, a_ * beta_ * std::pow(t, beta_ - 1.0)));
    }
    return cache_[i - 1];
  }

 private:
  double beta_, a_;
  std::vector<double> cache_;
};

std::uint64_t default_warmup(const SimulationSpec& spec) {
  if (spec.warmup != 0) return spec.warmup;
  return static_cast<std::uint64_t>(std::ceil(10.0 / spec.nu));
}

}  // namespace

ChainResult simulate_hazard_chain(const SimulationSpec& spec) {
  if (!(spec.beta > 0.0) || spec.beta > 1.0)
    throw std::invalid_argument("beta must be in (0, 1]");
  if (!(spec.nu > 0.0) || spec.nu >= 1.0)
    throw std::invalid_argument("nu must be in (0, 1)");
  HazardTable hazard(spec.beta, spec.nu);
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  std::uint64_t since_last = 1;  // clock i, resets to 1 after an occurrence
  std::uint64_t warmup = default_warmup(spec);
  for (std::uint64_t step = 0; step < warmup; ++step) {
    if (unif(rng) < hazard(since_last))
      since_last = 1;
    else
      ++since_last;
  }

  ChainResult result;
  std::uint64_t last_pos = 0;
  for (std::uint64_t pos = 1; pos <= spec.length; ++pos) {
    if (unif(rng) < hazard(since_last)) {
      if (last_pos != 0) result.gaps.push_back(pos - last_pos);
      result.positions.push_back(pos);
      last_pos = pos;
      since_last = 1;
    } else {
      ++since_last;
    }
  }
  return result;
}

SyntheticText compose_synthetic_text(const SyntheticTextSpec& spec) {
  if (spec.words.empty() && spec.length == 0)
    throw std::invalid_argument("empty synthetic text spec");
  for (std::size_t i = 0; i < spec.words.size(); ++i)
    for (std::size_t j = i + 1; j < spec.words.size(); ++j)
      if (spec.words[i].label == spec.words[j].label)
        throw std::invalid_argument("duplicate word label: " +
                                    spec.words[i].label);

  struct Chain {
    std::size_t index;
    HazardTable hazard;
    std::mt19937_64 rng;
    std::uint64_t since_last = 1;
  };
  std::vector<Chain> chains;
  chains.reserve(spec.words.size());
  for (std::size_t i = 0; i < spec.words.size(); ++i) {
    const auto& w = spec.words[i];
    chains.push_back(Chain{i, HazardTable(w.spec.beta, w.spec.nu),
                           std::mt19937_64(w.spec.seed), 1});
  }

  // Priority order among simultaneously firing words.
  std::vector<std::size_t> priority(chains.size());
  for (std::size_t i = 0; i < priority.size(); ++i) priority[i] = i;
  if (spec.priority_by_beta)
    std::stable_sort(priority.begin(), priority.end(),
                     [&](std::size_t a, std::size_t b) {
                       return spec.words[a].spec.beta < spec.words[b].spec.beta;
                     });

  // Independent warmup per chain.
  for (auto& c : chains) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uint64_t warmup = default_warmup(spec.words[c.index].spec);
    for (std::uint64_t step = 0; step < warmup; ++step) {
      if (unif(c.rng) < c.hazard(c.since_last))
        c.since_last = 1;
      else
        ++c.since_last;
    }
  }

  SyntheticText text;
  text.stream.tokens.reserve(spec.length);
  text.positions.resize(spec.words.size());
  for (const auto& w : spec.words) text.labels.push_back(w.label);

  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<bool> fired(chains.size());
  for (std::uint64_t pos = 1; pos <= spec.length; ++pos) {
    for (auto& c : chains) fired[c.index] = unif(c.rng) < c.hazard(c.since_last);
    std::size_t winner = chains.size();
    for (std::size_t p : priority) {
      if (fired[p]) {
        winner = p;
        break;
      }
    }
    // Only the emitted word's clock resets; losing words continue aging.
    for (auto& c : chains) {
      if (c.index == winner)
        c.since_last = 1;
      else
        ++c.since_last;
    }
    if (winner < chains.size()) {
      text.stream.tokens.push_back(spec.words[winner].label);
      text.positions[winner].push_back(pos);
    } else {
      text.stream.tokens.push_back(spec.filler_label);
    }
  }
  return text;
}

}  // namespace recur
