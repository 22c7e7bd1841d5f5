// Command-line front end: analyze | word | simulate | stats.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "recur/pipeline.hpp"

namespace {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kIoError = 3,
  kAnalysisError = 4,
};

void add_shared_flags(CLI::App* cmd, recur::RunConfig& config,
                      std::string& method) {
  cmd->add_option("-i,--input", config.inputs, "input text file(s)");
  cmd->add_option("--manifest", config.manifest,
                  "manifest file, one corpus path per line");
  cmd->add_option("--min-count", config.min_count,
                  "keep words occurring strictly more than this");
  cmd->add_option("--min-tau", config.min_tau, "fit only tau >= this cutoff");
  cmd->add_option("--method", method, "fit method: mle | lsq")
      ->check(CLI::IsMember({"mle", "lsq", "lsq_survival"}));
  cmd->add_option("--bins-per-decade", config.bins_per_decade,
                  "log-binning resolution");
  cmd->add_option("--seed", config.seed, "RNG seed");
  cmd->add_option("--format", config.format, "output format: csv | jsonl")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  cmd->add_option("-o,--out", config.out_dir, "output directory");
  cmd->add_option("--threads", config.threads,
                  "worker threads (0 = all cores)");
  cmd->add_flag("--keep-case", [&config](std::int64_t) {
    config.rules.case_folding = false;
  }, "disable case folding");
  cmd->add_flag("--keep-hyphens", [&config](std::int64_t) {
    config.rules.split_on_hyphen = false;
  }, "treat internal hyphens as word characters");
  cmd->add_flag("--keep-digits", [&config](std::int64_t) {
    config.rules.digits_are_letters = true;
  }, "treat digits as word characters");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"word recurrence-time analysis and renewal-process simulation"};
  app.require_subcommand(1);

  recur::RunConfig config;
  std::string method = "mle";
  std::string word, spec_path, fits_path, lexicon_path, pairs_path;
  std::size_t window = 21, top_k = 50;

  CLI::App* analyze =
      app.add_subcommand("analyze", "fit every vocabulary word");
  add_shared_flags(analyze, config, method);

  CLI::App* word_cmd =
      app.add_subcommand("word", "detail tables for a single word");
  add_shared_flags(word_cmd, config, method);
  word_cmd->add_option("word", word, "word to analyze")->required();

  CLI::App* simulate =
      app.add_subcommand("simulate", "generate a synthetic corpus");
  add_shared_flags(simulate, config, method);
  simulate->add_option("spec", spec_path, "simulation spec file")->required();

  CLI::App* stats =
      app.add_subcommand("stats", "secondary analyses over a fit table");
  add_shared_flags(stats, config, method);
  stats->add_option("--fits", fits_path, "fit table from analyze")->required();
  stats->add_option("--lexicon", lexicon_path, "word<TAB>class lexicon");
  stats->add_option("--pairs", pairs_path, "word<TAB>word pair file");
  stats->add_option("--window", window, "running-median window (odd)");
  stats->add_option("--top-k", top_k, "keyword list length");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    config.method = recur::fit_method_from_string(method);
    if (analyze->parsed()) {
      recur::AnalyzeResult result = recur::cmd_analyze(config);
      std::size_t fitted = 0;
      for (const auto& r : result.rows)
        if (r.has_weibull) ++fitted;
      std::cerr << "analyzed " << result.rows.size() << " words ("
                << fitted << " fitted) over " << result.n_tokens
                << " tokens\n";
    } else if (word_cmd->parsed()) {
      recur::WordDetail detail = recur::cmd_word(config, word);
      std::cerr << "word " << word << ": N_w=" << detail.series.n_occurrences
                << " mean_tau=" << detail.series.mean_tau << '\n';
    } else if (simulate->parsed()) {
      recur::SimulateResult result = recur::cmd_simulate(config, spec_path);
      std::cerr << "wrote " << result.corpus_path << " and "
                << result.truth_path << '\n';
    } else if (stats->parsed()) {
      recur::StatsResult result =
          recur::cmd_stats(config, fits_path, lexicon_path, pairs_path,
                           window, top_k);
      for (const auto& w : result.warnings)
        std::cerr << "warning: " << w << '\n';
    }
  } catch (const recur::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const recur::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kAnalysisError;
  }
  return kOk;
}
