#pragma once

#include <functional>
#include <ostream>
#include <string>

namespace recur {

// Gamma function for x > 0; throws std::domain_error otherwise.
double gamma_fn(double x);

// Poisson baseline: f(tau) = mu * exp(-mu * tau).
struct ExponentialModel {
  double mu = 0.0;
  // Free prefactor for the two-parameter comparison fit, F = c * exp(-mu*tau).
  // The constrained baseline has c = 1.
  double c = 1.0;

  double survival(double tau) const;
  double density(double tau) const;
  double hazard(double t) const;
};

// Stretched exponential F(tau) = exp(-a * tau^beta), 0 < beta <= 1, with the
// scale a slaved to the word rate nu so that the model mean is 1/nu.
struct WeibullModel {
  double beta = 1.0;
  double a = 0.0;
  double nu = 0.0;  // rate the scale was constrained to, kept for audit

  double survival(double tau) const;
  double density(double tau) const;   // throws at tau = 0 when beta < 1
  double hazard(double t) const;      // a * beta * t^(beta-1); t > 0
  double mean() const { return 1.0 / nu; }
};

// a = (nu * Gamma((beta+1)/beta))^beta, from imposing mean = 1/nu.
WeibullModel weibull_from_rate(double beta, double nu);

// f(tau) = c * tau^(-alpha - b*ln(tau)) on [1, inf). Requires b > 0, or
// b = 0 with alpha > 1, for normalizability.
struct ZipfAlekseevModel {
  double alpha = 0.0;
  double b = 0.0;
  double c = 0.0;

  double survival(double tau) const;  // 1 for tau <= 1
  double density(double tau) const;   // 0 below 1
};

// Computes the normalization constant and returns the model.
ZipfAlekseevModel zipf_alekseev(double alpha, double b);

// Adaptive Simpson quadrature, used for normalization checks.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double tol);

void write_model_record(const WeibullModel& m, std::ostream& out);
void write_model_record(const ExponentialModel& m, std::ostream& out);
void write_model_record(const ZipfAlekseevModel& m, std::ostream& out);

}  // namespace recur
