#include "recur/models.hpp"

#include <cmath>
#include <stdexcept>

namespace recur {

double gamma_fn(double x) {
  if (!(x > 0.0)) throw std::domain_error("gamma_fn: x must be > 0");
  return std::tgamma(x);
}

double ExponentialModel::survival(double tau) const {
  if (tau < 0.0) throw std::domain_error("survival: tau must be >= 0");
  return c * std::exp(-mu * tau);
}

double ExponentialModel::density(double tau) const {
  if (tau < 0.0) throw std::domain_error("density: tau must be >= 0");
  return c * mu * std::exp(-mu * tau);
}

double ExponentialModel::hazard(double t) const {
  if (!(t > 0.0)) throw std::domain_error("hazard: t must be > 0");
  return mu;
}

double WeibullModel::survival(double tau) const {
  if (tau < 0.0) throw std::domain_error("survival: tau must be >= 0");
  return std::exp(-a * std::pow(tau, beta));
}

double WeibullModel::density(double tau) const {
  if (!(tau > 0.0)) {
    if (tau == 0.0 && beta == 1.0) return a;
    throw std::domain_error("density: tau must be > 0 for beta < 1");
  }
  return a * beta * std::pow(tau, beta - 1.0) *
         std::exp(-a * std::pow(tau, beta));
}

double WeibullModel::hazard(double t) const {
  if (!(t > 0.0)) throw std::domain_error("hazard: t must be > 0");
  return a * beta * std::pow(t, beta - 1.0);
}

WeibullModel weibull_from_rate(double beta, double nu) {
  if (!(beta > 0.0) || beta > 1.0)
    throw std::domain_error("weibull_from_rate: beta must be in (0, 1]");
  if (!(nu > 0.0))
    throw std::domain_error("weibull_from_rate: nu must be > 0");
  WeibullModel m;
  m.beta = beta;
  m.nu = nu;
  m.a = std::pow(nu * gamma_fn((beta + 1.0) / beta), beta);
  return m;
}

namespace {

// I(L) = integral_L^inf exp(-b u^2 + s u) du for b > 0.
double za_tail_integral(double s, double b, double L) {
  double m = s / (2.0 * b);
  double x = std::sqrt(b) * (L - m);
  double pref = 0.5 * std::sqrt(M_PI / b);
  if (x < 25.0) return pref * std::exp(s * s / (4.0 * b)) * std::erfc(x);
  // erfc underflows; asymptotic erfc(x) ~ exp(-x^2)/(x sqrt(pi))
  double log_val = std::log(pref) + s * s / (4.0 * b) - x * x -
                   std::log(x * std::sqrt(M_PI));
  return std::exp(log_val);
}

}  // namespace

double ZipfAlekseevModel::density(double tau) const {
  if (tau < 1.0) return 0.0;
  double lt = std::log(tau);
  return c * std::exp(-(alpha + b * lt) * lt);
}

double ZipfAlekseevModel::survival(double tau) const {
  if (tau <= 1.0) return 1.0;
  double s = 1.0 - alpha;
  double L = std::log(tau);
  if (b > 0.0) return c * za_tail_integral(s, b, L);
  return c * std::exp(s * L) / (alpha - 1.0);
}

ZipfAlekseevModel zipf_alekseev(double alpha, double b) {
  if (b < 0.0 || (b == 0.0 && alpha <= 1.0))
    throw std::domain_error(
        "zipf_alekseev: need b > 0, or b = 0 with alpha > 1");
  ZipfAlekseevModel m;
  m.alpha = alpha;
  m.b = b;
  double s = 1.0 - alpha;
  double total = b > 0.0 ? za_tail_integral(s, b, 0.0) : 1.0 / (alpha - 1.0);
  m.c = 1.0 / total;
  return m;
}

namespace {

double simpson(const std::function<double(double)>& f, double lo, double hi,
               double flo, double fmid, double fhi) {
  return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
}

double adaptive(const std::function<double(double)>& f, double lo, double hi,
                double flo, double fmid, double fhi, double whole, double tol,
                int depth) {
  double mid = 0.5 * (lo + hi);
  double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
  double flm = f(lm), frm = f(rm);
  double left = simpson(f, lo, mid, flo, flm, fmid);
  double right = simpson(f, mid, hi, fmid, frm, fhi);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive(f, lo, mid, flo, flm, fmid, left, tol / 2.0, depth - 1) +
         adaptive(f, mid, hi, fmid, frm, fhi, right, tol / 2.0, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double tol) {
  double mid = 0.5 * (lo + hi);
  double flo = f(lo), fmid = f(mid), fhi = f(hi);
  double whole = simpson(f, lo, hi, flo, fmid, fhi);
  return adaptive(f, lo, hi, flo, fmid, fhi, whole, tol, 50);
}

void write_model_record(const WeibullModel& m, std::ostream& out) {
  double target = std::pow(m.nu * gamma_fn((m.beta + 1.0) / m.beta), m.beta);
  out << "kind weibull\nbeta " << m.beta << "\na " << m.a << "\nnu " << m.nu
      << "\nconstraint_residual " << std::abs(m.a - target) / target << '\n';
}

void write_model_record(const ExponentialModel& m, std::ostream& out) {
  out << "kind exponential\nmu " << m.mu << "\nc " << m.c << '\n';
}

void write_model_record(const ZipfAlekseevModel& m, std::ostream& out) {
  out << "kind zipf_alekseev\nalpha " << m.alpha << "\nb " << m.b << "\nc "
      << m.c << '\n';
}

}  // namespace recur
