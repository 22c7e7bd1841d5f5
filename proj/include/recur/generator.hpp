#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "recur/corpus.hpp"
#include "recur/models.hpp"

namespace recur {

// One simulated word: renewal process with hazard min(1, a*beta*i^(beta-1)),
// where i counts tokens since the last occurrence (starting at 1).
struct SimulationSpec {
  double beta = 1.0;
  double nu = 0.0;              // target occurrence rate per token
  std::uint64_t length = 0;     // tokens to generate
  std::uint64_t seed = 0;
  std::uint64_t warmup = 0;     // 0 = default 10/nu tokens, discarded
};

struct ChainResult {
  std::vector<std::uint64_t> positions;  // within [1, length]
  std::vector<std::uint64_t> gaps;       // inter-occurrence gaps, = taus
};

// RNG algorithm recorded in run metadata for reproducibility.
inline constexpr const char* kRngName = "mt19937_64";

// Inverse-transform sampling of Eq-style recurrence times:
// tau = (-ln U / a)^(1/beta). Deterministic per seed.
std::vector<double> sample_recurrence_inverse(const WeibullModel& model,
                                              std::size_t n,
                                              std::uint64_t seed,
                                              bool ceil_to_int = false);

// Token-by-token hazard chain over a length-N clock.
ChainResult simulate_hazard_chain(const SimulationSpec& spec);

struct WordSpec {
  std::string label;
  SimulationSpec spec;
};

// Multi-word composition: independent chains on a shared clock, exactly one
// token per step. On collision the highest-priority word (lowest beta first
// by default) is emitted and only that word's clock resets.
struct SyntheticTextSpec {
  std::vector<WordSpec> words;
  std::string filler_label = "_";
  std::uint64_t length = 0;
  bool priority_by_beta = true;  // else: listed order
};

struct SyntheticText {
  TokenStream stream;
  // Ground truth per word, in spec order.
  std::vector<std::string> labels;
  std::vector<std::vector<std::uint64_t>> positions;
};

SyntheticText compose_synthetic_text(const SyntheticTextSpec& spec);

}  // namespace recur
