// Test-only helpers: Kolmogorov-Smirnov tests and small utilities, kept
// independent of the library's fitting/estimation paths.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace testsupport {

// Kolmogorov distribution tail Q(lambda) = P(D > lambda-ish).
inline double kolmogorov_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    double term = 2.0 * std::pow(-1.0, k - 1) *
                  std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-12) break;
  }
  return std::min(1.0, std::max(0.0, sum));
}

// One-sample KS p-value of samples against the given CDF.
inline double ks_one_sample(std::vector<double> samples,
                            const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double f = cdf(samples[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  double sqrt_n = std::sqrt(n);
  return kolmogorov_q((sqrt_n + 0.12 + 0.11 / sqrt_n) * d);
}

// Two-sample KS p-value.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    // Consume whole tie blocks before comparing, so integer-valued samples
    // are evaluated at the completed ECDF jumps only.
    double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    double fa = static_cast<double>(i) / a.size();
    double fb = static_cast<double>(j) / b.size();
    d = std::max(d, std::abs(fa - fb));
  }
  double ne = static_cast<double>(a.size()) * b.size() /
              static_cast<double>(a.size() + b.size());
  double sqrt_ne = std::sqrt(ne);
  return kolmogorov_q((sqrt_ne + 0.12 + 0.11 / sqrt_ne) * d);
}

inline std::vector<double> at_least(const std::vector<double>& samples,
                                    double cut) {
  std::vector<double> out;
  for (double s : samples)
    if (s >= cut) out.push_back(s);
  return out;
}

// Scratch directory unique to the calling test.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("recurlab_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testsupport
