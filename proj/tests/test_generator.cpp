#include "recur/generator.hpp"

#include <cmath>
#include <numeric>

#include "doctest.h"
#include "recur/fitting.hpp"
#include "recur/recurrence.hpp"
#include "recur/stats.hpp"
#include "support.hpp"

using namespace recur;

namespace {

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

}  // namespace

TEST_CASE("inverse transform reproduces the exponential mean") {
  double mu = 0.004;
  WeibullModel expo = weibull_from_rate(1.0, mu);
  std::vector<double> taus = sample_recurrence_inverse(expo, 1000000, 91);
  CHECK(mean_of(taus) == doctest::Approx(1.0 / mu).epsilon(0.005));
}

TEST_CASE("inverse transform honors the imposed mean for any beta") {
  for (auto [beta, nu] : {std::pair{0.3, 0.01}, {0.46, 1.0 / 820.0},
                          {0.7, 0.002}}) {
    WeibullModel m = weibull_from_rate(beta, nu);
    // Relative error of the sample mean scales with the coefficient of
    // variation, which grows quickly as beta drops; 4e6 draws keep the
    // beta = 0.3 case comfortably inside 1%.
    std::vector<double> taus = sample_recurrence_inverse(m, 4000000, 17);
    CHECK(mean_of(taus) == doctest::Approx(1.0 / nu).epsilon(0.01));
  }
}

TEST_CASE("inverse transform inverts the survival function") {
  // U = F(tau) by construction: tau = 4 corresponds to U = e^-2 when
  // beta = 0.5, a = 1, and in general the transformed samples are uniform.
  WeibullModel m = weibull_from_rate(0.5, 0.5);  // a = 1
  CHECK(std::pow(-std::log(std::exp(-2.0)) / m.a, 1.0 / m.beta) ==
        doctest::Approx(4.0).epsilon(1e-12));
  std::vector<double> taus = sample_recurrence_inverse(m, 20000, 3);
  for (double& t : taus) t = m.survival(t);
  double p = testsupport::ks_one_sample(
      taus, [](double u) { return u; });  // U = F(tau) is uniform(0,1)
  CHECK(p > 0.01);
}

TEST_CASE("ceiled samples are integers at least 1") {
  WeibullModel m = weibull_from_rate(0.4, 0.01);
  std::vector<double> taus = sample_recurrence_inverse(m, 5000, 2, true);
  for (double t : taus) {
    CHECK(t >= 1.0);
    CHECK(t == std::floor(t));
  }
}

TEST_CASE("beta = 1 chain is a Bernoulli process") {
  SimulationSpec spec;
  spec.beta = 1.0;
  spec.nu = 0.003;
  spec.length = 1000000;
  spec.seed = 44;
  ChainResult chain = simulate_hazard_chain(spec);
  double expected = spec.nu * static_cast<double>(spec.length);
  double sigma = std::sqrt(expected * (1.0 - spec.nu));
  CHECK(std::abs(static_cast<double>(chain.positions.size()) - expected) <
        3.0 * sigma);
}

TEST_CASE("chain gaps match the analytic distribution across seeds") {
  double nu = 1.0 / 500.0;
  WeibullModel model = weibull_from_rate(0.4, nu);
  double cut = 10.0;
  int accepted = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SimulationSpec spec;
    spec.beta = 0.4;
    spec.nu = nu;
    spec.length = 10000000;
    spec.seed = 1000 + seed;
    ChainResult chain = simulate_hazard_chain(spec);
    // De-discretize: subtracting U[0,1) turns the integer gaps into draws
    // from the piecewise-linear interpolation of the discrete CDF, which a
    // continuous-null KS test can evaluate fairly. The chain survival after
    // t whole steps tracks the continuous curve at t + 1/2.
    std::mt19937_64 jitter_rng(spec.seed ^ 0xabcdef);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> taus;
    taus.reserve(chain.gaps.size());
    for (auto g : chain.gaps)
      taus.push_back(static_cast<double>(g) - unif(jitter_rng));
    std::vector<double> tail = testsupport::at_least(taus, cut - 0.5);
    double f_cut = model.survival(cut);
    double p = testsupport::ks_one_sample(tail, [&](double t) {
      return 1.0 - model.survival(t + 0.5) / f_cut;
    });
    if (p > 0.01) ++accepted;
  }
  CHECK(accepted >= 8);
}

TEST_CASE("gap log equals position differences") {
  SimulationSpec spec;
  spec.beta = 0.6;
  spec.nu = 0.01;
  spec.length = 100000;
  spec.seed = 12;
  ChainResult chain = simulate_hazard_chain(spec);
  REQUIRE(chain.positions.size() >= 2);
  REQUIRE(chain.gaps.size() == chain.positions.size() - 1);
  for (std::size_t i = 1; i < chain.positions.size(); ++i)
    CHECK(chain.gaps[i - 1] == chain.positions[i] - chain.positions[i - 1]);
  CHECK(chain.positions.front() >= 1);
  CHECK(chain.positions.back() <= spec.length);
}

TEST_CASE("identical spec and seed give identical output") {
  SimulationSpec spec;
  spec.beta = 0.5;
  spec.nu = 0.005;
  spec.length = 200000;
  spec.seed = 77;
  ChainResult a = simulate_hazard_chain(spec);
  ChainResult b = simulate_hazard_chain(spec);
  CHECK(a.positions == b.positions);
  CHECK(a.gaps == b.gaps);

  SyntheticTextSpec text_spec;
  text_spec.length = 50000;
  text_spec.words.push_back({"w", spec});
  SyntheticText t1 = compose_synthetic_text(text_spec);
  SyntheticText t2 = compose_synthetic_text(text_spec);
  CHECK(t1.stream.tokens == t2.stream.tokens);
}

TEST_CASE("mean rate converges to nu") {
  for (double beta : {0.4, 1.0}) {
    SimulationSpec spec;
    spec.beta = beta;
    spec.nu = 0.005;
    spec.length = 5000000;  // nu * N = 2.5e4
    spec.seed = 9;
    ChainResult chain = simulate_hazard_chain(spec);
    double rate = static_cast<double>(chain.positions.size()) /
                  static_cast<double>(spec.length);
    CHECK(rate == doctest::Approx(spec.nu).epsilon(0.02));
  }
}

TEST_CASE("generated gaps are uncorrelated at lag 1") {
  SimulationSpec spec;
  spec.beta = 0.4;
  spec.nu = 0.002;
  spec.length = 1;  // overwritten below to reach 1e4 gaps
  spec.length = static_cast<std::uint64_t>(10001.0 / spec.nu * 1.1);
  spec.seed = 31;
  ChainResult chain = simulate_hazard_chain(spec);
  REQUIRE(chain.gaps.size() >= 10000);
  std::vector<double> taus(chain.gaps.begin(), chain.gaps.begin() + 10000);
  CHECK(std::abs(autocorrelation(taus, 1)) < 0.02);
}

TEST_CASE("inverse-transform and hazard-chain samplers agree") {
  double nu = 1.0 / 300.0;
  WeibullModel model = weibull_from_rate(0.5, nu);
  int accepted = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    // Round (rather than ceil) the continuous draws so both samples live on
    // the integer grid with matching survival at half-integers.
    std::vector<double> inv =
        sample_recurrence_inverse(model, 100000, 500 + seed);
    for (double& t : inv) t = std::round(t);
    SimulationSpec spec;
    spec.beta = 0.5;
    spec.nu = nu;
    spec.length = static_cast<std::uint64_t>(100001.0 / nu * 1.05);
    spec.seed = 900 + seed;
    ChainResult chain = simulate_hazard_chain(spec);
    std::vector<double> gaps(chain.gaps.begin(), chain.gaps.end());
    double p = testsupport::ks_two_sample(testsupport::at_least(inv, 10.0),
                                          testsupport::at_least(gaps, 10.0));
    if (p > 0.01) ++accepted;
  }
  CHECK(accepted >= 8);
}

TEST_CASE("single-word synthetic text bookkeeping") {
  SimulationSpec spec;
  spec.beta = 0.7;
  spec.nu = 0.01;
  spec.length = 100000;
  spec.seed = 4;
  SyntheticTextSpec text_spec;
  text_spec.length = spec.length;
  text_spec.words.push_back({"word", spec});
  SyntheticText text = compose_synthetic_text(text_spec);
  CHECK(text.stream.tokens.size() == spec.length);
  std::size_t count = 0;
  for (const auto& t : text.stream.tokens)
    if (t == "word") ++count;
  CHECK(count == text.positions[0].size());
  CHECK(count > 0);
  // Extracted recurrences equal the logged positions exactly.
  RecurrenceSeries series = extract_recurrences(text.stream, "word");
  CHECK(series.positions == text.positions[0]);
}

TEST_CASE("zero tracked words gives an all-filler stream") {
  SyntheticTextSpec spec;
  spec.length = 100;
  spec.filler_label = "_";
  SyntheticText text = compose_synthetic_text(spec);
  CHECK(text.stream.tokens.size() == 100);
  for (const auto& t : text.stream.tokens) CHECK(t == "_");
}

TEST_CASE("duplicate labels are rejected") {
  SyntheticTextSpec spec;
  spec.length = 10;
  SimulationSpec w;
  w.beta = 0.5;
  w.nu = 0.1;
  spec.words.push_back({"a", w});
  spec.words.push_back({"a", w});
  CHECK_THROWS_AS(compose_synthetic_text(spec), std::invalid_argument);
}

TEST_CASE("two-word composition preserves the beta ordering end to end") {
  SyntheticTextSpec text_spec;
  text_spec.length = 2000000;
  SimulationSpec bursty;
  bursty.beta = 0.4;
  bursty.nu = 1.0 / 500.0;
  bursty.seed = 21;
  SimulationSpec regular = bursty;
  regular.beta = 0.9;
  regular.seed = 22;
  text_spec.words.push_back({"bursty", bursty});
  text_spec.words.push_back({"regular", regular});
  SyntheticText text = compose_synthetic_text(text_spec);

  auto fitted = [&](const std::string& label) {
    RecurrenceSeries series = extract_recurrences(text.stream, label);
    ModelFit fit = fit_weibull(series, FitMethod::mle);
    return std::get<WeibullModel>(fit.model).beta;
  };
  double b1 = fitted("bursty");
  double b2 = fitted("regular");
  CHECK(b1 < b2);
  CHECK(b1 == doctest::Approx(0.4).scale(1.0).epsilon(0.05));
  CHECK(b2 == doctest::Approx(0.9).scale(1.0).epsilon(0.05));
}

TEST_CASE("chain parameter validation") {
  SimulationSpec spec;
  spec.beta = 1.5;
  spec.nu = 0.1;
  spec.length = 10;
  CHECK_THROWS_AS(simulate_hazard_chain(spec), std::invalid_argument);
  spec.beta = 0.5;
  spec.nu = 0.0;
  CHECK_THROWS_AS(simulate_hazard_chain(spec), std::invalid_argument);
}
