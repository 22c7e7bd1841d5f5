#include "recur/pipeline.hpp"

#include <atomic>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace recur {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write: " + path.string());
  return out;
}

void write_metadata(const RunConfig& config, const std::string& subcommand,
                    json extra) {
  json meta;
  meta["tool_version"] = kToolVersion;
  meta["subcommand"] = subcommand;
  meta["rng"] = kRngName;
  meta["seed"] = config.seed;
  meta["inputs"] = config.inputs;
  meta["manifest"] = config.manifest;
  meta["min_count"] = config.min_count;
  meta["min_tau"] = config.min_tau;
  meta["method"] = to_string(config.method);
  meta["bins_per_decade"] = config.bins_per_decade;
  meta["format"] = config.format;
  meta["case_folding"] = config.rules.case_folding;
  meta["split_on_hyphen"] = config.rules.split_on_hyphen;
  meta["digits_are_letters"] = config.rules.digits_are_letters;
  meta.update(extra);
  auto out = open_out(fs::path(config.out_dir) / "metadata.json");
  out << meta.dump(2) << '\n';
}

void ensure_out_dir(const RunConfig& config) {
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + config.out_dir);
}

}  // namespace

TokenStream load_corpus(const RunConfig& config) {
  std::vector<std::string> paths;
  if (!config.manifest.empty()) {
    try {
      paths = read_manifest(config.manifest);
    } catch (const std::runtime_error& e) {
      throw IoError(e.what());
    }
  } else if (!config.inputs.empty()) {
    paths = config.inputs;
    std::sort(paths.begin(), paths.end());  // corpus order without a manifest
  } else {
    throw ConfigError("no corpus given: use --input or --manifest");
  }
  try {
    return tokenize_files(paths, config.rules);
  } catch (const std::runtime_error& e) {
    throw IoError(e.what());
  }
}

AnalyzeResult cmd_analyze(const RunConfig& config) {
  ensure_out_dir(config);
  TokenStream stream = load_corpus(config);
  if (stream.tokens.empty()) throw AnalysisError("empty corpus");

  FrequencyTable table = count_words(stream);
  std::vector<std::string> vocab = select_vocabulary(table, config.min_count);

  // Occurrence positions for every vocabulary word in one pass.
  std::unordered_map<std::string, std::size_t> vocab_index;
  for (std::size_t i = 0; i < vocab.size(); ++i) vocab_index[vocab[i]] = i;
  std::vector<std::vector<std::uint64_t>> positions(vocab.size());
  for (std::size_t j = 0; j < stream.tokens.size(); ++j) {
    auto it = vocab_index.find(stream.tokens[j]);
    if (it != vocab_index.end()) positions[it->second].push_back(j + 1);
  }

  AnalyzeResult result;
  result.n_tokens = stream.tokens.size();
  result.rows.resize(vocab.size());

  auto fit_one = [&](std::size_t i) {
    AnalyzeRow& row = result.rows[i];
    row.word = vocab[i];
    RecurrenceSeries series = series_from_positions(
        vocab[i], std::move(positions[i]), stream.tokens.size());
    row.n_w = series.n_occurrences;
    row.mean_tau = series.mean_tau;
    std::vector<std::string> errors;
    try {
      ModelFit fit = fit_weibull(series, config.method, config.min_tau);
      const auto& m = std::get<WeibullModel>(fit.model);
      row.beta = m.beta;
      row.a = m.a;
      row.r2_weibull = fit.r_squared;
      row.has_weibull = true;
    } catch (const std::exception& e) {
      errors.push_back(std::string("weibull: ") + e.what());
    }
    try {
      ModelFit fit = fit_exponential_free(series, config.min_tau);
      row.r2_exp2 = fit.r_squared;
      row.has_exp2 = true;
    } catch (const std::exception& e) {
      errors.push_back(std::string("exponential2: ") + e.what());
    }
    try {
      ModelFit fit = fit_zipf_alekseev(series, config.min_tau);
      row.r2_za = fit.r_squared;
      row.has_za = true;
    } catch (const std::exception& e) {
      errors.push_back(std::string("zipf_alekseev: ") + e.what());
    }
    try {
      HazardEstimate hz = empirical_hazard(series, config.bins_per_decade);
      PowerLawFit pl = fit_hazard_powerlaw(hz);
      row.hazard_slope = pl.slope;
      row.has_hazard_slope = true;
    } catch (const std::exception& e) {
      errors.push_back(std::string("hazard: ") + e.what());
    }
    for (std::size_t k = 0; k < errors.size(); ++k)
      row.error += (k ? "; " : "") + errors[k];
  };

  unsigned n_threads = config.threads
                           ? config.threads
                           : std::max(1u, std::thread::hardware_concurrency());
  if (n_threads <= 1 || vocab.size() < 2) {
    for (std::size_t i = 0; i < vocab.size(); ++i) fit_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    for (unsigned t = 0; t < n_threads; ++t)
      workers.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < vocab.size();
             i = next.fetch_add(1))
          fit_one(i);
      });
    for (auto& w : workers) w.join();
  }

  fs::path out_path = fs::path(config.out_dir) /
                      (config.format == "jsonl" ? "fits.jsonl" : "fits.csv");
  auto out = open_out(out_path);
  if (config.format == "jsonl") {
    for (const auto& r : result.rows) {
      json j;
      j["word"] = r.word;
      j["n_w"] = r.n_w;
      j["mean_tau"] = r.mean_tau;
      if (r.has_weibull) {
        j["beta"] = r.beta;
        j["a"] = r.a;
        j["r2_weibull"] = r.r2_weibull;
      }
      if (r.has_exp2) j["r2_exp2"] = r.r2_exp2;
      if (r.has_za) j["r2_za"] = r.r2_za;
      if (r.has_hazard_slope) j["hazard_slope"] = r.hazard_slope;
      j["method"] = to_string(config.method);
      j["min_tau"] = config.min_tau;
      if (!r.error.empty()) j["error"] = r.error;
      out << j.dump() << '\n';
    }
  } else {
    out << "word,n_w,mean_tau,beta,a,r2_weibull,r2_exp2,r2_za,hazard_slope,"
           "method,min_tau,error\n";
    for (const auto& r : result.rows) {
      out << r.word << ',' << r.n_w << ',' << fmt(r.mean_tau) << ','
          << (r.has_weibull ? fmt(r.beta) : "") << ','
          << (r.has_weibull ? fmt(r.a) : "") << ','
          << (r.has_weibull ? fmt(r.r2_weibull) : "") << ','
          << (r.has_exp2 ? fmt(r.r2_exp2) : "") << ','
          << (r.has_za ? fmt(r.r2_za) : "") << ','
          << (r.has_hazard_slope ? fmt(r.hazard_slope) : "") << ','
          << to_string(config.method) << ',' << config.min_tau << ','
          << r.error << '\n';
    }
  }
  write_metadata(config, "analyze",
                 {{"n_tokens", result.n_tokens},
                  {"vocabulary_size", vocab.size()}});
  return result;
}

WordDetail cmd_word(const RunConfig& config, const std::string& word) {
  ensure_out_dir(config);
  TokenStream stream = load_corpus(config);
  WordDetail detail;
  try {
    detail.series = extract_recurrences(stream, word);
  } catch (const std::runtime_error& e) {
    throw AnalysisError(e.what());
  }
  if (detail.series.taus.empty())
    throw AnalysisError("word occurs fewer than twice: " + word);

  detail.distribution = empirical_survival(detail.series);
  detail.hazard = empirical_hazard(detail.series, config.bins_per_decade);
  for (std::size_t i = 0; i < detail.distribution.support.size(); ++i) {
    double f_surv = detail.distribution.survival[i];
    if (f_surv >= 1.0 || f_surv <= 0.0) continue;  // transform undefined
    detail.wp_log_tau.push_back(std::log(detail.distribution.support[i]));
    detail.wp_loglog_f.push_back(std::log(-std::log(f_surv)));
  }
  detail.comparison =
      compare_models(detail.series, config.method, config.min_tau);

  fs::path dir(config.out_dir);
  {
    auto out = open_out(dir / ("word_" + word + "_distribution.csv"));
    write_distribution_csv(detail.distribution, out);
  }
  {
    auto out = open_out(dir / ("word_" + word + "_weibull_plot.csv"));
    out << "log_tau,loglog_F\n";
    for (std::size_t i = 0; i < detail.wp_log_tau.size(); ++i)
      out << fmt(detail.wp_log_tau[i]) << ',' << fmt(detail.wp_loglog_f[i])
          << '\n';
  }
  {
    auto out = open_out(dir / ("word_" + word + "_hazard.csv"));
    write_hazard_csv(detail.hazard, out);
  }
  {
    auto out = open_out(dir / ("word_" + word + "_fit.txt"));
    out << "word " << word << "\nn_w " << detail.series.n_occurrences
        << "\nmean_tau " << fmt(detail.series.mean_tau) << '\n';
    for (const auto& f : detail.comparison.fits) {
      out << "--\nmodel " << f.kind() << "\nr_squared " << fmt(f.r_squared)
          << "\nlog_likelihood " << fmt(f.log_likelihood) << '\n';
      std::visit([&](const auto& m) { write_model_record(m, out); }, f.model);
    }
    for (const auto& e : detail.comparison.errors) out << "error " << e << '\n';
  }
  write_metadata(config, "word",
                 {{"word", word}, {"n_tokens", stream.tokens.size()}});
  return detail;
}

SyntheticTextSpec read_simulation_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open simulation spec: " + path);
  SyntheticTextSpec spec;
  std::uint64_t base_seed = 0;
  std::uint64_t warmup = 0;
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw ConfigError("simulation spec line " + std::to_string(lineno) + ": " +
                      msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "length") {
      if (!(ls >> spec.length)) fail("expected: length N");
    } else if (key == "seed") {
      if (!(ls >> base_seed)) fail("expected: seed S");
    } else if (key == "warmup") {
      if (!(ls >> warmup)) fail("expected: warmup W");
    } else if (key == "filler") {
      if (!(ls >> spec.filler_label)) fail("expected: filler LABEL");
    } else if (key == "word") {
      WordSpec w;
      if (!(ls >> w.label >> w.spec.beta >> w.spec.nu))
        fail("expected: word LABEL BETA NU");
      if (!(w.spec.beta > 0.0) || w.spec.beta > 1.0)
        fail("beta must be in (0, 1]");
      if (!(w.spec.nu > 0.0) || w.spec.nu >= 1.0)
        fail("nu must be in (0, 1)");
      spec.words.push_back(std::move(w));
    } else {
      fail("unknown directive: " + key);
    }
  }
  if (spec.length == 0) fail("missing: length N");
  for (std::size_t i = 0; i < spec.words.size(); ++i) {
    spec.words[i].spec.length = spec.length;
    spec.words[i].spec.seed =
        base_seed + (i + 1) * 0x9E3779B97F4A7C15ULL;  // distinct per chain
    spec.words[i].spec.warmup = warmup;
  }
  return spec;
}

SimulateResult cmd_simulate(const RunConfig& config,
                            const std::string& spec_path) {
  ensure_out_dir(config);
  SyntheticTextSpec spec = read_simulation_spec(spec_path);
  SimulateResult result;
  result.text = compose_synthetic_text(spec);

  fs::path dir(config.out_dir);
  result.corpus_path = (dir / "corpus.txt").string();
  result.truth_path = (dir / "truth.jsonl").string();
  {
    auto out = open_out(result.corpus_path);
    for (std::size_t i = 0; i < result.text.stream.tokens.size(); ++i) {
      out << result.text.stream.tokens[i];
      out << ((i + 1) % 20 == 0 ? '\n' : ' ');
    }
    out << '\n';
  }
  {
    auto out = open_out(result.truth_path);
    for (std::size_t w = 0; w < spec.words.size(); ++w) {
      json j;
      j["word"] = spec.words[w].label;
      j["beta"] = spec.words[w].spec.beta;
      j["nu"] = spec.words[w].spec.nu;
      j["seed"] = spec.words[w].spec.seed;
      j["n_occurrences"] = result.text.positions[w].size();
      j["positions"] = result.text.positions[w];
      out << j.dump() << '\n';
    }
  }
  write_metadata(config, "simulate",
                 {{"spec", spec_path}, {"length", spec.length}});
  return result;
}

std::vector<AnalyzeRow> read_fit_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open fit table: " + path);
  std::vector<AnalyzeRow> rows;
  std::string line;
  bool jsonl = path.size() > 6 && path.substr(path.size() - 6) == ".jsonl";
  if (jsonl) {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      json j = json::parse(line);
      AnalyzeRow r;
      r.word = j.at("word").get<std::string>();
      r.n_w = j.value("n_w", 0ULL);
      r.mean_tau = j.value("mean_tau", 0.0);
      if (j.contains("beta")) {
        r.beta = j["beta"].get<double>();
        r.has_weibull = true;
      }
      rows.push_back(std::move(r));
    }
    return rows;
  }
  if (!std::getline(in, line)) throw IoError("empty fit table: " + path);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() < 6) continue;
    AnalyzeRow r;
    r.word = fields[0];
    r.n_w = std::stoull(fields[1]);
    r.mean_tau = std::stod(fields[2]);
    if (!fields[3].empty()) {
      r.beta = std::stod(fields[3]);
      r.has_weibull = true;
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

StatsResult cmd_stats(const RunConfig& config, const std::string& fits_path,
                      const std::string& lexicon_path,
                      const std::string& pairs_path,
                      std::size_t running_window, std::size_t top_keywords) {
  ensure_out_dir(config);
  std::vector<AnalyzeRow> table = read_fit_table(fits_path);
  std::vector<WordBeta> fits;
  std::unordered_map<std::string, double> beta_of;
  for (const auto& r : table) {
    if (!r.has_weibull) continue;
    fits.push_back(WordBeta{r.word, r.beta, r.mean_tau});
    beta_of[r.word] = r.beta;
  }
  if (fits.empty()) throw AnalysisError("fit table has no usable rows");

  StatsResult result;
  fs::path dir(config.out_dir);

  std::optional<Lexicon> lexicon;
  if (!lexicon_path.empty()) {
    std::ifstream lin(lexicon_path);
    if (!lin) throw IoError("cannot open lexicon: " + lexicon_path);
    lexicon = read_lexicon_tsv(lin);
  } else {
    result.warnings.push_back(
        "no lexicon given; class analyses skipped");
  }

  if (lexicon) {
    result.classes = class_summary(fits, *lexicon);
    if (result.classes->rows.empty())
      throw AnalysisError("no fitted word joins the lexicon");
    {
      auto out = open_out(dir / "class_summary.csv");
      out << "class,count,median,octile1,octile2,octile6,octile7\n";
      for (const auto& row : result.classes->rows)
        out << row.cls << ',' << row.count << ',' << fmt(row.median) << ','
            << fmt(row.octile1) << ',' << fmt(row.octile2) << ','
            << fmt(row.octile6) << ',' << fmt(row.octile7) << '\n';
    }
    {
      auto out = open_out(dir / "class_betas.csv");
      out << "class,beta\n";
      for (const auto& row : result.classes->rows)
        for (double b : row.betas) out << row.cls << ',' << fmt(b) << '\n';
    }
    // Variance decomposition needs the class labels joined to the fits.
    std::vector<double> betas, log_taus;
    std::vector<int> labels;
    for (const auto& f : fits) {
      auto it = lexicon->entries.find(f.word);
      if (it == lexicon->entries.end() || f.mean_tau <= 0.0) continue;
      betas.push_back(f.beta);
      labels.push_back(it->second);
      log_taus.push_back(std::log(f.mean_tau));
    }
    try {
      result.importance = relative_importance(betas, labels, log_taus);
      auto out = open_out(dir / "relative_importance.csv");
      out << "predictor,share,r2_full\n";
      out << "class," << fmt(result.importance->share_class) << ','
          << fmt(result.importance->r2_full) << '\n';
      out << "log_mean_tau," << fmt(result.importance->share_logfreq) << ','
          << fmt(result.importance->r2_full) << '\n';
    } catch (const std::exception& e) {
      result.warnings.push_back(std::string("relative importance skipped: ") +
                                e.what());
    }
  }

  if (running_window % 2 == 1 && running_window <= fits.size()) {
    result.medians = running_median(fits, running_window);
    auto out = open_out(dir / "running_median.csv");
    out << "mean_tau,median_beta,octile1,octile7\n";
    for (const auto& p : result.medians)
      out << fmt(p.mean_tau) << ',' << fmt(p.median) << ',' << fmt(p.octile1)
          << ',' << fmt(p.octile7) << '\n';
  } else {
    result.warnings.push_back("running median skipped: window invalid");
  }

  if (!pairs_path.empty()) {
    std::ifstream pin(pairs_path);
    if (!pin) throw IoError("cannot open pair file: " + pairs_path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(pin, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      auto tab = line.find('\t');
      if (tab == std::string::npos)
        throw ConfigError("pair file line " + std::to_string(lineno) +
                          ": expected a<TAB>b");
      std::string a = line.substr(0, tab), b = line.substr(tab + 1);
      auto ia = beta_of.find(a), ib = beta_of.find(b);
      if (ia == beta_of.end() || ib == beta_of.end()) {
        result.warnings.push_back("pair skipped (word not fitted): " + line);
        continue;
      }
      ++result.pair_total;
      if (ia->second > ib->second) ++result.pair_wins;
    }
    if (result.pair_total > 0) {
      result.pair_p_value = sign_test(result.pair_wins, result.pair_total);
      auto out = open_out(dir / "sign_test.csv");
      out << "wins,total,p_value\n";
      out << result.pair_wins << ',' << result.pair_total << ','
          << fmt(result.pair_p_value) << '\n';
    }
  }

  result.keywords = rank_keywords(fits, top_keywords);
  {
    auto out = open_out(dir / "keywords.csv");
    out << "rank,word,beta,mean_tau\n";
    for (std::size_t i = 0; i < result.keywords.size(); ++i)
      out << i + 1 << ',' << result.keywords[i].word << ','
          << fmt(result.keywords[i].beta) << ','
          << fmt(result.keywords[i].mean_tau) << '\n';
  }

  write_metadata(config, "stats",
                 {{"fits", fits_path},
                  {"lexicon", lexicon_path},
                  {"pairs", pairs_path},
                  {"warnings", result.warnings}});
  return result;
}

}  // namespace recur
