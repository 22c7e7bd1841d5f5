#include "recur/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace recur {

Lexicon read_lexicon_tsv(std::istream& in) {
  Lexicon lex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error("lexicon line " + std::to_string(lineno) +
                               ": expected word<TAB>class");
    std::string word = line.substr(0, tab);
    int cls = std::stoi(line.substr(tab + 1));
    if (cls < 1 || cls > 4)
      throw std::runtime_error("lexicon line " + std::to_string(lineno) +
                               ": class must be 1..4");
    lex.entries[word] = cls;
  }
  return lex;
}

double autocorrelation(const std::vector<double>& taus, std::size_t lag) {
  if (lag == 0) throw std::invalid_argument("lag must be >= 1");
  if (taus.size() < lag + 2)
    throw std::runtime_error("insufficient data: need at least lag+2 samples");
  std::size_t n = taus.size() - lag;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += taus[i];
    my += taus[i + lag];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = taus[i] - mx, dy = taus[i + lag] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw std::runtime_error("zero variance");
  return sxy / std::sqrt(sxx * syy);
}

double sign_test(std::uint64_t n_success, std::uint64_t n_trials) {
  if (n_success > n_trials)
    throw std::invalid_argument("n_success must be <= n_trials");
  double n = static_cast<double>(n_trials);
  double log_half = -n * std::log(2.0);
  // log C(n,k) + n*log(1/2), summed from k = n_success upward.
  std::vector<double> log_terms;
  for (std::uint64_t k = n_success; k <= n_trials; ++k) {
    double lk = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                std::lgamma(n - k + 1.0) + log_half;
    log_terms.push_back(lk);
  }
  double mx = *std::max_element(log_terms.begin(), log_terms.end());
  double sum = 0.0;
  for (double lt : log_terms) sum += std::exp(lt - mx);
  return std::exp(mx) * sum;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("empty sample");
  std::sort(values.begin(), values.end());
  double pos = q / 100.0 * static_cast<double>(values.size() - 1);
  std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  std::size_t hi = std::min(lo + 1, values.size() - 1);
  double frac = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

ClassSummary class_summary(const std::vector<WordBeta>& fits,
                           const Lexicon& lexicon) {
  std::map<int, std::vector<double>> by_class;
  ClassSummary summary;
  for (const auto& f : fits) {
    auto it = lexicon.entries.find(f.word);
    if (it == lexicon.entries.end())
      summary.missing_words.push_back(f.word);
    else
      by_class[it->second].push_back(f.beta);
  }
  if (by_class.empty()) {
    std::string msg = "no fitted word appears in the lexicon; missing:";
    for (const auto& w : summary.missing_words) msg += " " + w;
    throw std::runtime_error(msg);
  }
  for (auto& [cls, betas] : by_class) {
    ClassRow row;
    row.cls = cls;
    row.count = betas.size();
    row.median = percentile(betas, 50.0);
    row.octile1 = percentile(betas, 12.5);
    row.octile2 = percentile(betas, 25.0);
    row.octile6 = percentile(betas, 75.0);
    row.octile7 = percentile(betas, 87.5);
    row.betas = betas;
    summary.rows.push_back(std::move(row));
  }
  return summary;
}

std::vector<RunningMedianPoint> running_median(
    const std::vector<WordBeta>& pairs, std::size_t window) {
  if (window % 2 == 0) throw std::invalid_argument("window must be odd");
  if (window > pairs.size())
    throw std::invalid_argument("window larger than table");
  std::vector<WordBeta> sorted(pairs);
  std::sort(sorted.begin(), sorted.end(),
            [](const WordBeta& a, const WordBeta& b) {
              return a.mean_tau < b.mean_tau;
            });
  std::vector<RunningMedianPoint> out;
  std::size_t half = window / 2;
  for (std::size_t c = half; c + half < sorted.size(); ++c) {
    std::vector<double> win;
    win.reserve(window);
    for (std::size_t i = c - half; i <= c + half; ++i)
      win.push_back(sorted[i].beta);
    RunningMedianPoint p;
    p.mean_tau = sorted[c].mean_tau;
    p.median = percentile(win, 50.0);
    p.octile1 = percentile(win, 12.5);
    p.octile7 = percentile(win, 87.5);
    out.push_back(p);
  }
  return out;
}

namespace {

// Ordinary least squares R^2 of y on the given predictor columns plus an
// intercept, via normal equations.
double ols_r_squared(const std::vector<std::vector<double>>& cols,
                     const std::vector<double>& y) {
  std::size_t n = y.size();
  std::size_t p = cols.size() + 1;
  std::vector<std::vector<double>> X(n, std::vector<double>(p, 1.0));
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) X[i][j + 1] = cols[j][i];

  std::vector<std::vector<double>> A(p, std::vector<double>(p, 0.0));
  std::vector<double> b(p, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < p; ++r) {
      b[r] += X[i][r] * y[i];
      for (std::size_t c = 0; c < p; ++c) A[r][c] += X[i][r] * X[i][c];
    }
  }
  // Gaussian elimination with partial pivoting.
  std::vector<double> beta(p, 0.0);
  for (std::size_t col = 0; col < p; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < p; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    std::swap(A[col], A[piv]);
    std::swap(b[col], b[piv]);
    if (std::abs(A[col][col]) < 1e-12)
      throw std::runtime_error("rank-deficient design");
    for (std::size_t r = col + 1; r < p; ++r) {
      double f = A[r][col] / A[col][col];
      for (std::size_t c = col; c < p; ++c) A[r][c] -= f * A[col][c];
      b[r] -= f * b[col];
    }
  }
  for (std::size_t r = p; r-- > 0;) {
    double s = b[r];
    for (std::size_t c = r + 1; c < p; ++c) s -= A[r][c] * beta[c];
    beta[r] = s / A[r][r];
  }

  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sse = 0.0, sst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double yh = 0.0;
    for (std::size_t c = 0; c < p; ++c) yh += X[i][c] * beta[c];
    sse += (y[i] - yh) * (y[i] - yh);
    sst += (y[i] - my) * (y[i] - my);
  }
  if (sst == 0.0) throw std::runtime_error("zero variance in response");
  return 1.0 - sse / sst;
}

}  // namespace

ImportanceShares relative_importance(const std::vector<double>& betas,
                                     const std::vector<int>& class_labels,
                                     const std::vector<double>& log_mean_taus) {
  std::size_t n = betas.size();
  if (class_labels.size() != n || log_mean_taus.size() != n)
    throw std::invalid_argument("input lengths differ");
  if (n < 30)
    throw std::runtime_error("insufficient data: need at least 30 rows");

  // Dummy-code the classes (first level is the reference).
  std::vector<int> levels(class_labels);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  std::vector<std::vector<double>> class_cols;
  for (std::size_t l = 1; l < levels.size(); ++l) {
    std::vector<double> col(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      if (class_labels[i] == levels[l]) col[i] = 1.0;
    class_cols.push_back(std::move(col));
  }

  double r2_class = class_cols.empty() ? 0.0 : ols_r_squared(class_cols, betas);
  double r2_freq = ols_r_squared({log_mean_taus}, betas);
  std::vector<std::vector<double>> both(class_cols);
  both.push_back(log_mean_taus);
  double r2_both = ols_r_squared(both, betas);

  ImportanceShares s;
  s.r2_full = r2_both;
  // With two predictors the averaging-over-orderings decomposition is exact.
  s.share_class = 0.5 * (r2_class + (r2_both - r2_freq));
  s.share_logfreq = 0.5 * (r2_freq + (r2_both - r2_class));
  return s;
}

std::vector<std::uint64_t> counting_distribution(
    const std::vector<std::uint64_t>& positions, std::uint64_t window,
    std::uint64_t n_tokens) {
  if (window == 0) throw std::invalid_argument("window must be >= 1");
  if (window > n_tokens)
    throw std::invalid_argument("window larger than token count");
  std::uint64_t n_windows = n_tokens / window;
  std::vector<std::uint64_t> counts(n_windows, 0);
  for (std::uint64_t pos : positions) {
    if (pos == 0 || pos > n_windows * window) continue;  // outside tiling
    counts[(pos - 1) / window]++;
  }
  return counts;
}

std::vector<std::uint64_t> model_counting(const SimulationSpec& spec,
                                          std::uint64_t window,
                                          std::uint64_t n_windows) {
  SimulationSpec run = spec;
  run.length = window * n_windows;
  ChainResult chain = simulate_hazard_chain(run);
  return counting_distribution(chain.positions, window, run.length);
}

std::vector<WordBeta> rank_keywords(std::vector<WordBeta> fits,
                                    std::size_t top_k) {
  if (fits.empty()) throw std::invalid_argument("empty fit table");
  std::sort(fits.begin(), fits.end(), [](const WordBeta& a, const WordBeta& b) {
    if (a.beta != b.beta) return a.beta < b.beta;
    if (a.mean_tau != b.mean_tau) return a.mean_tau < b.mean_tau;
    return a.word < b.word;
  });
  if (top_k < fits.size()) fits.resize(top_k);
  return fits;
}

}  // namespace recur
