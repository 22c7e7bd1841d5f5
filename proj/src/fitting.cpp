#include "recur/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace recur {

std::string to_string(FitMethod m) {
  return m == FitMethod::mle ? "mle" : "lsq_survival";
}

FitMethod fit_method_from_string(const std::string& s) {
  if (s == "mle") return FitMethod::mle;
  if (s == "lsq" || s == "lsq_survival") return FitMethod::lsq_survival;
  throw std::invalid_argument("unknown fit method: " + s);
}

std::string ModelFit::kind() const {
  if (std::holds_alternative<WeibullModel>(model)) return "weibull";
  if (std::holds_alternative<ExponentialModel>(model)) return "exponential2";
  return "zipf_alekseev";
}

double ModelFit::survival(double tau) const {
  return std::visit([tau](const auto& m) { return m.survival(tau); }, model);
}

double ModelFit::density(double tau) const {
  return std::visit([tau](const auto& m) { return m.density(tau); }, model);
}

namespace {

std::vector<double> filtered(const std::vector<double>& taus,
                             std::uint64_t min_tau) {
  // min_tau = 1 means "fit everything", including fractional model samples.
  if (min_tau <= 1) return taus;
  std::vector<double> out;
  out.reserve(taus.size());
  for (double t : taus)
    if (t >= static_cast<double>(min_tau)) out.push_back(t);
  return out;
}

void require_samples(const std::vector<double>& taus) {
  if (taus.size() < kMinFitSamples)
    throw std::runtime_error("insufficient data: need at least " +
                             std::to_string(kMinFitSamples) +
                             " recurrence samples");
}

// Golden-section minimizer on [lo, hi].
double golden_section(const std::function<double(double)>& f, double lo,
                      double hi, double tol) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = f(x2);
    }
  }
  return 0.5 * (lo + hi);
}

// Survival conditioned on tau >= cutoff (no-op for cutoff <= 1).
double conditional_survival(const ModelFit& fit, double tau, double cutoff) {
  if (cutoff <= 1.0) return fit.survival(tau);
  return fit.survival(tau) / fit.survival(cutoff);
}

double attach_r_squared(const ModelFit& fit,
                        const EmpiricalDistribution& dist, double cutoff) {
  return r_squared(
      [&](double tau) { return conditional_survival(fit, tau, cutoff); },
      dist);
}

struct LinFit {
  double slope, intercept, r2;
};

LinFit linear_regression(const std::vector<double>& x,
                         const std::vector<double>& y) {
  std::size_t n = x.size();
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::runtime_error("degenerate support");
  LinFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

// Solves the 3x3 system A x = b by Gaussian elimination with pivoting.
std::array<double, 3> solve3(std::array<std::array<double, 3>, 3> A,
                             std::array<double, 3> b) {
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    std::swap(A[col], A[piv]);
    std::swap(b[col], b[piv]);
    if (A[col][col] == 0.0) throw std::runtime_error("rank-deficient design");
    for (int r = col + 1; r < 3; ++r) {
      double f = A[r][col] / A[col][col];
      for (int c = col; c < 3; ++c) A[r][c] -= f * A[col][c];
      b[r] -= f * b[col];
    }
  }
  std::array<double, 3> x{};
  for (int r = 2; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < 3; ++c) s -= A[r][c] * x[c];
    x[r] = s / A[r][r];
  }
  return x;
}

}  // namespace

ModelFit fit_weibull(const std::vector<double>& taus, double nu,
                     FitMethod method, std::uint64_t min_tau) {
  if (!(nu > 0.0)) throw std::invalid_argument("fit_weibull: nu must be > 0");
  std::vector<double> data = filtered(taus, min_tau);
  require_samples(data);
  double cutoff = static_cast<double>(min_tau);
  double n = static_cast<double>(data.size());

  std::function<double(double)> objective;
  EmpiricalDistribution dist = empirical_survival_of(data);
  if (method == FitMethod::mle) {
    double sum_log_tau = 0.0;
    for (double t : data) sum_log_tau += std::log(t);
    objective = [&, sum_log_tau, n, cutoff](double beta) {
      WeibullModel m = weibull_from_rate(beta, nu);
      double sum_pow = 0.0;
      for (double t : data) sum_pow += std::pow(t, beta);
      double ll = n * std::log(m.a * beta) + (beta - 1.0) * sum_log_tau -
                  m.a * sum_pow;
      if (cutoff > 1.0) ll += n * m.a * std::pow(cutoff, beta);
      return -ll;
    };
  } else {
    objective = [&, cutoff](double beta) {
      WeibullModel m = weibull_from_rate(beta, nu);
      double norm = cutoff > 1.0 ? m.survival(cutoff) : 1.0;
      double sse = 0.0;
      for (std::size_t i = 0; i < dist.support.size(); ++i) {
        double d = dist.survival[i] - m.survival(dist.support[i]) / norm;
        sse += d * d;
      }
      return sse;
    };
  }

  double beta = golden_section(objective, 0.01, 1.0, 1e-4);
  ModelFit fit;
  fit.model = weibull_from_rate(beta, nu);
  fit.method = method;
  fit.n_samples = data.size();
  fit.min_tau_cutoff = min_tau;
  fit.at_poisson_boundary = beta >= 0.999;
  const auto& m = std::get<WeibullModel>(fit.model);
  double ll = 0.0;
  for (double t : data) ll += std::log(m.density(t));
  if (cutoff > 1.0) ll -= n * std::log(m.survival(cutoff));
  fit.log_likelihood = ll;
  fit.r_squared = attach_r_squared(fit, dist, cutoff);
  return fit;
}

ModelFit fit_weibull(const RecurrenceSeries& series, FitMethod method,
                     std::uint64_t min_tau) {
  std::vector<double> taus(series.taus.begin(), series.taus.end());
  return fit_weibull(taus, series.rate, method, min_tau);
}

ModelFit fit_exponential_free(const std::vector<double>& taus,
                              std::uint64_t min_tau) {
  std::vector<double> data = filtered(taus, min_tau);
  require_samples(data);
  EmpiricalDistribution dist = empirical_survival_of(data);
  if (dist.support.size() < 2)
    throw std::runtime_error("degenerate support");

  // For fixed mu the optimal prefactor c is closed-form; search mu only.
  auto sse_at = [&](double mu, double* c_out) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < dist.support.size(); ++i) {
      double e = std::exp(-mu * dist.support[i]);
      num += dist.survival[i] * e;
      den += e * e;
    }
    double c = den > 0.0 ? num / den : 1.0;
    if (c_out) *c_out = c;
    double sse = 0.0;
    for (std::size_t i = 0; i < dist.support.size(); ++i) {
      double d = dist.survival[i] - c * std::exp(-mu * dist.support[i]);
      sse += d * d;
    }
    return sse;
  };

  double mean = std::accumulate(data.begin(), data.end(), 0.0) / data.size();
  double log_mu0 = std::log(1.0 / mean);
  double log_mu = golden_section(
      [&](double lm) { return sse_at(std::exp(lm), nullptr); }, log_mu0 - 5.0,
      log_mu0 + 5.0, 1e-6);
  ExponentialModel m;
  m.mu = std::exp(log_mu);
  sse_at(m.mu, &m.c);

  ModelFit fit;
  fit.model = m;
  fit.method = FitMethod::lsq_survival;
  fit.n_samples = data.size();
  fit.min_tau_cutoff = min_tau;
  double ll = 0.0;  // likelihood of the rate, ignoring the free prefactor
  for (double t : data) ll += std::log(m.mu) - m.mu * t;
  fit.log_likelihood = ll;
  fit.r_squared = r_squared(
      [&](double tau) { return m.survival(tau); }, dist);
  return fit;
}

ModelFit fit_exponential_free(const RecurrenceSeries& series,
                              std::uint64_t min_tau) {
  std::vector<double> taus(series.taus.begin(), series.taus.end());
  return fit_exponential_free(taus, min_tau);
}

ModelFit fit_zipf_alekseev(const std::vector<double>& taus,
                           std::uint64_t min_tau) {
  std::vector<double> data = filtered(taus, min_tau);
  require_samples(data);
  EmpiricalDistribution binned =
      log_binned_density_of(data, kDefaultBinsPerDecade);
  if (binned.support.size() < 3)
    throw std::runtime_error("insufficient data: too few log bins");

  // log f = k - alpha*x - b*x^2 with x = ln tau: polynomial least squares,
  // each bin weighted by its event count (inverse variance of a log count).
  std::vector<double> x, y, w;
  double total = static_cast<double>(data.size());
  for (std::size_t i = 0; i < binned.support.size(); ++i) {
    x.push_back(std::log(binned.support[i]));
    y.push_back(std::log(binned.density[i]));
    w.push_back(binned.density[i] * binned.bin_widths[i] * total);
  }
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0, t0 = 0, t1 = 0, t2 = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double xi = x[i], x2i = xi * xi, wi = w[i];
    s0 += wi;
    s1 += wi * xi;
    s2 += wi * x2i;
    s3 += wi * x2i * xi;
    s4 += wi * x2i * x2i;
    t0 += wi * y[i];
    t1 += wi * y[i] * xi;
    t2 += wi * y[i] * x2i;
  }
  auto sol = solve3({{{s0, s1, s2}, {s1, s2, s3}, {s2, s3, s4}}},
                    {t0, t1, t2});
  double alpha = -sol[1];
  double b = -sol[2];
  if (b < 0.0) {  // not normalizable; fall back to the pure power law
    double mx = s1 / s0, my = t0 / s0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sxx += w[i] * (x[i] - mx) * (x[i] - mx);
      sxy += w[i] * (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::runtime_error("degenerate support");
    alpha = -sxy / sxx;
    b = 0.0;
  }
  ModelFit fit;
  try {
    fit.model = zipf_alekseev(alpha, b);
  } catch (const std::domain_error& e) {
    throw std::runtime_error(std::string("zipf-alekseev fit: ") + e.what());
  }
  fit.method = FitMethod::lsq_survival;
  fit.n_samples = data.size();
  fit.min_tau_cutoff = min_tau;
  const auto& m = std::get<ZipfAlekseevModel>(fit.model);
  double ll = 0.0;
  for (double t : data) ll += std::log(m.density(std::max(t, 1.0)));
  fit.log_likelihood = ll;
  EmpiricalDistribution dist = empirical_survival_of(data);
  fit.r_squared =
      attach_r_squared(fit, dist, static_cast<double>(min_tau));
  return fit;
}

ModelFit fit_zipf_alekseev(const RecurrenceSeries& series,
                           std::uint64_t min_tau) {
  std::vector<double> taus(series.taus.begin(), series.taus.end());
  return fit_zipf_alekseev(taus, min_tau);
}

double r_squared(const std::function<double(double)>& model_survival,
                 const EmpiricalDistribution& dist) {
  if (dist.support.size() < 2)
    throw std::runtime_error("degenerate support");
  double mean = std::accumulate(dist.survival.begin(), dist.survival.end(),
                                0.0) /
                dist.survival.size();
  double sse = 0.0, sst = 0.0;
  for (std::size_t i = 0; i < dist.support.size(); ++i) {
    double d = dist.survival[i] - model_survival(dist.support[i]);
    sse += d * d;
    sst += (dist.survival[i] - mean) * (dist.survival[i] - mean);
  }
  if (sst == 0.0) throw std::runtime_error("degenerate support");
  return 1.0 - sse / sst;
}

PowerLawFit fit_hazard_powerlaw(const HazardEstimate& hazard) {
  if (hazard.t_values.size() < 5)
    throw std::runtime_error("insufficient hazard support");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < hazard.t_values.size(); ++i) {
    x.push_back(std::log(hazard.t_values[i]));
    y.push_back(std::log(hazard.m_values[i]));
  }
  LinFit lin = linear_regression(x, y);
  return PowerLawFit{lin.slope, lin.intercept, lin.r2};
}

ComparisonReport compare_models(const RecurrenceSeries& series,
                                FitMethod method, std::uint64_t min_tau) {
  ComparisonReport report;
  auto attempt = [&](const char* name, auto&& fn) {
    try {
      report.fits.push_back(fn());
    } catch (const std::exception& e) {
      report.errors.push_back(std::string(name) + ": " + e.what());
    }
  };
  attempt("weibull", [&] { return fit_weibull(series, method, min_tau); });
  attempt("exponential2",
          [&] { return fit_exponential_free(series, min_tau); });
  attempt("zipf_alekseev",
          [&] { return fit_zipf_alekseev(series, min_tau); });
  if (report.fits.empty() && !report.errors.empty())
    throw std::runtime_error("all model fits failed: " + report.errors[0]);
  std::sort(report.fits.begin(), report.fits.end(),
            [](const ModelFit& a, const ModelFit& b) {
              return a.r_squared > b.r_squared;
            });
  return report;
}

}  // namespace recur
