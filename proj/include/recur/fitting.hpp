#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "recur/models.hpp"
#include "recur/recurrence.hpp"

namespace recur {

enum class FitMethod { mle, lsq_survival };

std::string to_string(FitMethod m);
FitMethod fit_method_from_string(const std::string& s);

struct ModelFit {
  std::variant<WeibullModel, ExponentialModel, ZipfAlekseevModel> model;
  FitMethod method = FitMethod::mle;
  double r_squared = 0.0;
  double log_likelihood = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t min_tau_cutoff = 1;
  bool at_poisson_boundary = false;

  std::string kind() const;
  double survival(double tau) const;
  double density(double tau) const;
};

struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;  // log-space
  double r_squared = 0.0;
};

// Minimum number of usable recurrence samples for any fit.
inline constexpr std::size_t kMinFitSamples = 30;

// Constrained stretched-exponential fit: the scale a is always slaved to beta
// through the rate nu, leaving beta as the single free parameter. Golden
// section search on [0.01, 1] to |d beta| <= 1e-4. For min_tau > 1 the model
// is conditioned on tau >= min_tau.
ModelFit fit_weibull(const std::vector<double>& taus, double nu,
                     FitMethod method, std::uint64_t min_tau = 1);
ModelFit fit_weibull(const RecurrenceSeries& series, FitMethod method,
                     std::uint64_t min_tau = 1);

// Two-parameter comparison baseline F = c * exp(-mu * tau), least squares on
// survival values over the distinct observed taus.
ModelFit fit_exponential_free(const std::vector<double>& taus,
                              std::uint64_t min_tau = 1);
ModelFit fit_exponential_free(const RecurrenceSeries& series,
                              std::uint64_t min_tau = 1);

// f(tau) ~ tau^(-alpha - b ln tau): (alpha, b) by least squares on log
// density over log-binned support; normalization recomputed on [1, inf).
ModelFit fit_zipf_alekseev(const std::vector<double>& taus,
                           std::uint64_t min_tau = 1);
ModelFit fit_zipf_alekseev(const RecurrenceSeries& series,
                           std::uint64_t min_tau = 1);

// 1 - SSE/SST between model and empirical survival, equally weighted over
// the distribution's support points.
double r_squared(const std::function<double(double)>& model_survival,
                 const EmpiricalDistribution& dist);

// Least-squares line of log m versus log t; slope estimates beta - 1.
PowerLawFit fit_hazard_powerlaw(const HazardEstimate& hazard);

struct ComparisonReport {
  std::vector<ModelFit> fits;          // sorted by R^2 descending
  std::vector<std::string> errors;     // per-model failures, run continues
};

ComparisonReport compare_models(const RecurrenceSeries& series,
                                FitMethod method = FitMethod::mle,
                                std::uint64_t min_tau = 1);

}  // namespace recur
