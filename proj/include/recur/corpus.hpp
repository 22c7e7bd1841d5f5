#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <string>
#include <unordered_map>
#include <vector>

namespace recur {

// Tokenization policy. Defaults: letters (plus internal apostrophes) form a
// token, digits and punctuation separate, everything is case-folded.
struct TokenizerRules {
  bool case_folding = true;
  bool keep_internal_apostrophe = true;
  bool digits_are_letters = false;
  bool split_on_hyphen = true;
  std::vector<std::string> drop_tokens;
};

// Ordered word tokens. Position of tokens[j] is j+1 (1-based).
struct TokenStream {
  std::vector<std::string> tokens;

  std::size_t size() const { return tokens.size(); }
};

struct FrequencyTable {
  std::unordered_map<std::string, std::uint64_t> entries;
  std::uint64_t total = 0;  // always equals the stream length it came from
};

// Streaming core: invokes sink for each token in order. Memory use is
// independent of input size.
void for_each_token(std::istream& in, const TokenizerRules& rules,
                    const std::function<void(std::string&&)>& sink);

TokenStream tokenize(std::istream& in, const TokenizerRules& rules);
TokenStream tokenize(const std::string& text, const TokenizerRules& rules);

// Tokenizes a file; throws std::runtime_error naming the path on I/O failure.
TokenStream tokenize_file(const std::string& path, const TokenizerRules& rules);

// Concatenates several sources in the given order.
TokenStream tokenize_files(const std::vector<std::string>& paths,
                           const TokenizerRules& rules);

// Reads a manifest (one path per line, blank lines and #-comments skipped).
// Relative paths are resolved against the manifest's directory.
std::vector<std::string> read_manifest(const std::string& manifest_path);

FrequencyTable count_words(const TokenStream& stream);

// Words occurring strictly more than min_count times, sorted by descending
// count, ties broken lexicographically.
std::vector<std::string> select_vocabulary(const FrequencyTable& table,
                                           std::uint64_t min_count);

void write_frequency_tsv(const FrequencyTable& table, std::ostream& out);

}  // namespace recur
