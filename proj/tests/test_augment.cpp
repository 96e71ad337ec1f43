#include <doctest.h>

#include "augment.hpp"
#include "error.hpp"
#include "rng.hpp"
#include "textutil.hpp"

using namespace stkit;
using augment::CorruptionConfig;
using augment::HomophoneTable;
using augment::SentencePair;

namespace {

HomophoneTable two_to_table() {
  return HomophoneTable::parse("two\tto too\n");
}

}  // namespace

TEST_CASE("homophone table parsing and validation") {
  HomophoneTable table = HomophoneTable::parse("two\tto too\nfour\tfor\n");
  CHECK(table.size() == 2);
  REQUIRE(table.find("two") != nullptr);
  CHECK(*table.find("two") == std::vector<std::string>{"to", "too"});
  CHECK(table.find("one") == nullptr);

  CHECK_THROWS_AS(HomophoneTable::parse("two to\n"), Error);        // no tab
  CHECK_THROWS_AS(HomophoneTable::parse("two\ttwo\n"), Error);      // self map
  CHECK_THROWS_AS(HomophoneTable::parse("Two\tto\n"), Error);       // uppercase
  CHECK_THROWS_AS(HomophoneTable::parse("two\t\n"), Error);         // empty alts
  CHECK(HomophoneTable::parse("").size() == 0);
}

TEST_CASE("corrupt with zero rates is the identity") {
  CorruptionConfig config;
  config.seed = 42;
  textnorm::SpokenText text = {"the", "quick", "brown", "fox"};
  CHECK(augment::corrupt(text, two_to_table(), config) == text);
}

TEST_CASE("corrupt swaps the paper-style homophone at rate one") {
  CorruptionConfig config;
  config.homophone_rate = 1.0;
  config.seed = 7;
  HomophoneTable table = HomophoneTable::parse("two\tto\n");
  textnorm::SpokenText text = {"two", "percent"};
  CHECK(augment::corrupt(text, table, config) ==
        textnorm::SpokenText{"to", "percent"});
}

TEST_CASE("corrupt deletes everything at del rate one") {
  CorruptionConfig config;
  config.del_rate = 1.0;
  config.seed = 3;
  textnorm::SpokenText text = {"a", "b", "c", "d", "e"};
  CHECK(augment::corrupt(text, two_to_table(), config).empty());
}

TEST_CASE("corrupt insertion places vocab words after the current token") {
  CorruptionConfig config;
  config.ins_rate = 1.0;
  config.vocab = {"x"};
  config.seed = 1;
  textnorm::SpokenText text = {"a", "b"};
  CHECK(augment::corrupt(text, two_to_table(), config) ==
        textnorm::SpokenText{"a", "x", "b", "x"});
}

TEST_CASE("corrupt substitution draws from the vocab") {
  CorruptionConfig config;
  config.sub_rate = 1.0;
  config.vocab = {"z"};
  config.seed = 1;
  textnorm::SpokenText text = {"a", "b", "c"};
  CHECK(augment::corrupt(text, two_to_table(), config) ==
        textnorm::SpokenText{"z", "z", "z"});
}

TEST_CASE("corrupt output stays in spoken form") {
  CorruptionConfig config;
  config.homophone_rate = 0.3;
  config.sub_rate = 0.2;
  config.del_rate = 0.2;
  config.ins_rate = 0.2;
  config.vocab = {"oh", "uh", "um"};
  config.seed = 99;
  textnorm::SpokenText text = {"two", "cats", "sat", "on", "two", "mats"};
  auto out = augment::corrupt(text, two_to_table(), config);
  CHECK(textnorm::is_spoken_form(out));
}

TEST_CASE("corrupt config validation") {
  textnorm::SpokenText text = {"a"};
  CorruptionConfig config;
  config.sub_rate = 0.5;  // vocab required
  CHECK_THROWS_AS(augment::corrupt(text, two_to_table(), config), Error);

  config = {};
  config.homophone_rate = 0.6;
  config.del_rate = 0.6;  // rates sum over 1
  CHECK_THROWS_AS(augment::corrupt(text, two_to_table(), config), Error);

  config = {};
  config.del_rate = -0.1;
  CHECK_THROWS_AS(augment::corrupt(text, two_to_table(), config), Error);
}

TEST_CASE("deletion count tracks the binomial expectation") {
  // 10,000 tokens, del_rate 0.1: expect 1000 +- 3 * sqrt(900)
  CorruptionConfig config;
  config.del_rate = 0.1;
  config.seed = 2024;
  textnorm::SpokenText text(10000, "word");
  auto out = augment::corrupt(text, two_to_table(), config);
  double deletions = static_cast<double>(text.size() - out.size());
  double sigma = std::sqrt(10000 * 0.1 * 0.9);
  CHECK(std::abs(deletions - 1000.0) <= 3.0 * sigma);
}

TEST_CASE("augment_bitext composes normalize and corrupt") {
  CorruptionConfig config;
  config.seed = 5;
  std::vector<SentencePair> pairs = {
      {"It's 2 PM.", "Es ist 14 Uhr.", ""},
      {"Hello, World!", "Hallo Welt!", ""},
  };
  auto out = augment::augment_bitext(pairs, two_to_table(), config);
  REQUIRE(out.size() == 2);
  CHECK(out[0].source == "it's two pm");
  CHECK(out[0].target == "Es ist 14 Uhr.");
  CHECK(out[1].source == "hello world");
  CHECK(out[1].target == "Hallo Welt!");
}

TEST_CASE("augment_bitext is deterministic and order-independent") {
  CorruptionConfig config;
  config.homophone_rate = 0.2;
  config.sub_rate = 0.2;
  config.del_rate = 0.2;
  config.ins_rate = 0.2;
  config.vocab = {"uh", "um"};
  config.seed = 31;

  std::vector<SentencePair> pairs;
  for (int i = 0; i < 100; ++i)
    pairs.push_back({"sentence number " + std::to_string(i) + " with two words.",
                     "target " + std::to_string(i), ""});

  auto a = augment::augment_bitext(pairs, two_to_table(), config);
  auto b = augment::augment_bitext(pairs, two_to_table(), config);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].source == b[i].source);
    CHECK(a[i].target == pairs[i].target);
  }

  // a pair's outcome is a function of (content, seed, index) alone
  CHECK(augment::augment_bitext({pairs[0]}, two_to_table(), config)[0].source ==
        a[0].source);
}

TEST_CASE("augment_bitext on an empty corpus") {
  CorruptionConfig config;
  CHECK(augment::augment_bitext({}, two_to_table(), config).empty());
}

TEST_CASE("bitext text round trip") {
  std::string text = "a b\tc d\ne\tf\n";
  auto pairs = augment::parse_bitext(text);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].source == "a b");
  CHECK(pairs[0].target == "c d");
  CHECK(augment::format_bitext(pairs) == text);
  CHECK_THROWS_AS(augment::parse_bitext("no tab here\n"), Error);
}
