#include "recur/corpus.hpp"

#include <fstream>
#include <random>

#include "doctest.h"
#include "support.hpp"

using namespace recur;

TEST_CASE("tokenize case-folds and strips punctuation") {
  TokenStream s = tokenize("The cat. THE CAT!", TokenizerRules{});
  CHECK(s.tokens == std::vector<std::string>{"the", "cat", "the", "cat"});
  CHECK(s.size() == 4);
}

TEST_CASE("tokenize of empty input is empty") {
  TokenStream s = tokenize("", TokenizerRules{});
  CHECK(s.size() == 0);
}

TEST_CASE("internal apostrophes join, edge apostrophes do not") {
  TokenStream s = tokenize("don't 'quoted' rock'", TokenizerRules{});
  CHECK(s.tokens == std::vector<std::string>{"don't", "quoted", "rock"});
}

TEST_CASE("digits and hyphens separate by default") {
  TokenStream s = tokenize("well-known 123 abc123def x-1", TokenizerRules{});
  CHECK(s.tokens ==
        std::vector<std::string>{"well", "known", "abc", "def", "x"});

  TokenizerRules keep_hyphen;
  keep_hyphen.split_on_hyphen = false;
  CHECK(tokenize("well-known", keep_hyphen).tokens ==
        std::vector<std::string>{"well-known"});

  TokenizerRules keep_digits;
  keep_digits.digits_are_letters = true;
  CHECK(tokenize("abc123def 42", keep_digits).tokens ==
        std::vector<std::string>{"abc123def", "42"});
}

TEST_CASE("multi-byte utf-8 letters stay inside tokens") {
  TokenStream s = tokenize("caf\xc3\xa9 au lait", TokenizerRules{});
  CHECK(s.tokens ==
        std::vector<std::string>{"caf\xc3\xa9", "au", "lait"});
}

TEST_CASE("invalid utf-8 bytes act as separators, never fatal") {
  std::string bad = "good\xffwords \xc3(broken";
  TokenStream s = tokenize(bad, TokenizerRules{});
  CHECK(s.tokens == std::vector<std::string>{"good", "words", "broken"});
}

TEST_CASE("drop_tokens removes listed tokens after normalization") {
  TokenizerRules rules;
  rules.drop_tokens = {"the"};
  TokenStream s = tokenize("The cat the dog", rules);
  CHECK(s.tokens == std::vector<std::string>{"cat", "dog"});
}

TEST_CASE("tokenize is deterministic and count totals match stream length") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> ch(0, 79);
  const std::string alphabet =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
      " .,'!-0123456789\t\n\xc3\xa9\xff";
  for (int trial = 0; trial < 30; ++trial) {
    std::string text;
    std::uniform_int_distribution<std::size_t> len(0, 400);
    std::size_t n = len(rng);
    for (std::size_t i = 0; i < n; ++i)
      text.push_back(alphabet[ch(rng) % alphabet.size()]);
    TokenStream a = tokenize(text, TokenizerRules{});
    TokenStream b = tokenize(text, TokenizerRules{});
    CHECK(a.tokens == b.tokens);
    FrequencyTable table = count_words(a);
    std::uint64_t total = 0;
    for (const auto& [w, c] : table.entries) {
      CHECK(c >= 1);
      CHECK_FALSE(w.empty());
      total += c;
    }
    CHECK(total == a.size());
    CHECK(table.total == a.size());
  }
}

TEST_CASE("count_words exact counts") {
  TokenStream s;
  s.tokens = {"the", "cat", "the"};
  FrequencyTable t = count_words(s);
  CHECK(t.entries.at("the") == 2);
  CHECK(t.entries.at("cat") == 1);
  CHECK(t.total == 3);

  CHECK(count_words(TokenStream{}).entries.empty());
}

TEST_CASE("select_vocabulary uses strict threshold and tie-break") {
  FrequencyTable t;
  t.entries = {{"a", 5}, {"b", 2}, {"c", 5}};
  t.total = 12;
  CHECK(select_vocabulary(t, 2) == std::vector<std::string>{"a", "c"});
  CHECK(select_vocabulary(t, 5).empty());

  // Strict filtering: every listed word exceeds the cutoff, none below joins.
  for (std::uint64_t cut = 0; cut <= 6; ++cut) {
    auto vocab = select_vocabulary(t, cut);
    for (const auto& w : vocab) CHECK(t.entries.at(w) > cut);
    for (const auto& [w, c] : t.entries)
      if (c > cut)
        CHECK(std::find(vocab.begin(), vocab.end(), w) != vocab.end());
  }
}

TEST_CASE("manifest order drives corpus concatenation") {
  auto dir = testsupport::scratch_dir("manifest");
  std::ofstream(dir / "b.txt") << "beta gamma";
  std::ofstream(dir / "a.txt") << "alpha";
  std::ofstream(dir / "manifest.txt") << "b.txt\n\n# comment\na.txt\n";

  auto paths = read_manifest((dir / "manifest.txt").string());
  REQUIRE(paths.size() == 2);
  TokenStream s = tokenize_files(paths, TokenizerRules{});
  CHECK(s.tokens == std::vector<std::string>{"beta", "gamma", "alpha"});
}

TEST_CASE("missing file raises an error naming the source") {
  CHECK_THROWS_WITH_AS(tokenize_file("/nonexistent/corpus.txt",
                                     TokenizerRules{}),
                       doctest::Contains("/nonexistent/corpus.txt"),
                       std::runtime_error);
}
