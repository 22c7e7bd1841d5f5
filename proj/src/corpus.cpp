#include "recur/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace recur {

namespace {

// Number of continuation bytes expected after a UTF-8 lead byte, or -1 for
// an invalid lead.
int utf8_follow(unsigned char c) {
  if (c < 0x80) return 0;
  if ((c & 0xE0) == 0xC0) return 1;
  if ((c & 0xF0) == 0xE0) return 2;
  if ((c & 0xF8) == 0xF0) return 3;
  return -1;
}

bool is_continuation(unsigned char c) { return (c & 0xC0) == 0x80; }

}  // namespace

void for_each_token(std::istream& in, const TokenizerRules& rules,
                    const std::function<void(std::string&&)>& sink) {
  std::set<std::string> drop(rules.drop_tokens.begin(), rules.drop_tokens.end());

  std::string token;
  bool pending_joiner = false;  // apostrophe/hyphen seen inside a token
  char joiner_char = '\0';

  auto flush = [&] {
    pending_joiner = false;
    if (!token.empty()) {
      if (drop.find(token) == drop.end()) sink(std::move(token));
      token.clear();
    }
  };

  auto append_letter = [&](const char* bytes, int n) {
    if (pending_joiner) {
      token.push_back(joiner_char);
      pending_joiner = false;
    }
    token.append(bytes, static_cast<std::size_t>(n));
  };

  char buf[4096];
  std::string carry;  // incomplete multi-byte sequence spanning a read boundary
  while (in) {
    in.read(buf, sizeof(buf));
    std::streamsize got = in.gcount();
    if (got <= 0) break;
    std::string chunk = carry + std::string(buf, static_cast<std::size_t>(got));
    carry.clear();

    std::size_t i = 0;
    while (i < chunk.size()) {
      unsigned char c = static_cast<unsigned char>(chunk[i]);
      if (c < 0x80) {
        bool letter = std::isalpha(c) ||
                      (rules.digits_are_letters && std::isdigit(c));
        if (letter) {
          char lc = rules.case_folding
                        ? static_cast<char>(std::tolower(c))
                        : static_cast<char>(c);
          append_letter(&lc, 1);
        } else if (c == '\'' && rules.keep_internal_apostrophe &&
                   !token.empty() && !pending_joiner) {
          pending_joiner = true;
          joiner_char = '\'';
        } else if (c == '-' && !rules.split_on_hyphen && !token.empty() &&
                   !pending_joiner) {
          pending_joiner = true;
          joiner_char = '-';
        } else {
          flush();
        }
        ++i;
        continue;
      }
      int follow = utf8_follow(c);
      if (follow < 0) {  // stray byte, treat as separator
        flush();
        ++i;
        continue;
      }
      if (i + static_cast<std::size_t>(follow) >= chunk.size()) {
        // Sequence may be completed by the next read.
        if (in) {
          carry = chunk.substr(i);
          break;
        }
        flush();  // truncated at end of input
        i = chunk.size();
        break;
      }
      bool valid = true;
      for (int k = 1; k <= follow; ++k) {
        if (!is_continuation(static_cast<unsigned char>(chunk[i + k]))) {
          valid = false;
          break;
        }
      }
      if (valid) {
        append_letter(chunk.data() + i, follow + 1);
        i += static_cast<std::size_t>(follow) + 1;
      } else {
        flush();
        ++i;
      }
    }
  }
  // Carry left over means the input ended mid-sequence; discard it.
  flush();
}

TokenStream tokenize(std::istream& in, const TokenizerRules& rules) {
  TokenStream stream;
  for_each_token(in, rules,
                 [&](std::string&& t) { stream.tokens.push_back(std::move(t)); });
  return stream;
}

TokenStream tokenize(const std::string& text, const TokenizerRules& rules) {
  std::istringstream in(text);
  return tokenize(in, rules);
}

TokenStream tokenize_file(const std::string& path, const TokenizerRules& rules) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  return tokenize(in, rules);
}

TokenStream tokenize_files(const std::vector<std::string>& paths,
                           const TokenizerRules& rules) {
  TokenStream stream;
  for (const auto& p : paths) {
    TokenStream part = tokenize_file(p, rules);
    stream.tokens.insert(stream.tokens.end(),
                         std::make_move_iterator(part.tokens.begin()),
                         std::make_move_iterator(part.tokens.end()));
  }
  return stream;
}

std::vector<std::string> read_manifest(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw std::runtime_error("cannot open manifest: " + manifest_path);
  std::filesystem::path base =
      std::filesystem::path(manifest_path).parent_path();
  std::vector<std::string> paths;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::filesystem::path p(line);
    if (p.is_relative()) p = base / p;
    paths.push_back(p.string());
  }
  return paths;
}

FrequencyTable count_words(const TokenStream& stream) {
  FrequencyTable table;
  for (const auto& t : stream.tokens) ++table.entries[t];
  table.total = stream.tokens.size();
  return table;
}

std::vector<std::string> select_vocabulary(const FrequencyTable& table,
                                           std::uint64_t min_count) {
  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (const auto& [word, count] : table.entries)
    if (count > min_count) kept.emplace_back(word, count);
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> words;
  words.reserve(kept.size());
  for (auto& [w, c] : kept) words.push_back(std::move(w));
  return words;
}

void write_frequency_tsv(const FrequencyTable& table, std::ostream& out) {
  std::vector<std::pair<std::string, std::uint64_t>> rows(table.entries.begin(),
                                                          table.entries.end());
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  for (const auto& [w, c] : rows) out << w << '\t' << c << '\n';
}

}  // namespace recur
