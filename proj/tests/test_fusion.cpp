#include <doctest.h>

#include <cmath>

#include "error.hpp"
#include "fusion.hpp"
#include "rng.hpp"
#include "textutil.hpp"

using namespace stkit;
using fusion::Hypothesis;
using fusion::MissingScorePolicy;
using fusion::NBestList;
using fusion::NBestSet;
using fusion::WeightVector;

namespace {

std::vector<std::string> ranked_keys(const NBestList& list) {
  std::vector<std::string> out;
  for (const auto& h : list.hypotheses) out.push_back(join_tokens(h.tokens));
  return out;
}

}  // namespace

TEST_CASE("nbest parsing groups by sentence id") {
  NBestSet set = fusion::parse_nbest(
      "0 ||| a b ||| tm=-1.5 lm=-2\n"
      "0 ||| a c ||| tm=-2 lm=-1\n"
      "1 ||| d ||| tm=-0.5 lm=-0.25\n");
  REQUIRE(set.lists.size() == 2);
  CHECK(set.lists[0].sentence_id == "0");
  REQUIRE(set.lists[0].hypotheses.size() == 2);
  CHECK(set.lists[0].hypotheses[0].scores.at("tm") == doctest::Approx(-1.5));
  CHECK(set.lists[0].hypotheses[0].scores.at("lm") == doctest::Approx(-2.0));
  CHECK(set.lists[1].hypotheses.size() == 1);
}

TEST_CASE("nbest duplicate lines merge scores with later values winning") {
  NBestSet set = fusion::parse_nbest(
      "0 ||| a b ||| tm=-1\n"
      "0 ||| a b ||| lm=-2 tm=-3\n");
  REQUIRE(set.lists.size() == 1);
  REQUIRE(set.lists[0].hypotheses.size() == 1);
  CHECK(set.lists[0].hypotheses[0].scores.at("tm") == doctest::Approx(-3.0));
  CHECK(set.lists[0].hypotheses[0].scores.at("lm") == doctest::Approx(-2.0));
}

TEST_CASE("nbest parsing rejects malformed lines") {
  CHECK_THROWS_AS(fusion::parse_nbest("0 ||| a b\n"), Error);
  CHECK_THROWS_AS(fusion::parse_nbest("0 ||| a ||| tm=x\n"), Error);
  CHECK_THROWS_AS(fusion::parse_nbest("0 ||| a ||| noequals\n"), Error);
  CHECK_THROWS_AS(fusion::parse_nbest("0 |||  ||| tm=1\n"), Error);
  CHECK_THROWS_AS(fusion::parse_nbest("0 ||| a ||| tm=1 ||| extra\n"), Error);
}

TEST_CASE("nbest text round trip") {
  std::string text =
      "0 ||| a b ||| lm=-2 tm=-1.5\n"
      "1 ||| c ||| lm=-1 tm=-0.5\n";
  CHECK(fusion::format_nbest(fusion::parse_nbest(text)) == text);
}

TEST_CASE("merge unions hypotheses and scores") {
  NBestList a{"0", {{{"x"}, {{"tm", -1.0}}}, {{"y"}, {{"tm", -2.0}}}}};
  NBestList b{"0", {{{"x"}, {{"lm", -3.0}}}, {{"z"}, {{"tm", -4.0}, {"lm", -5.0}}}}};

  SUBCASE("impute_worst fills gaps with the model minimum") {
    NBestList merged = fusion::merge_nbest({a, b}, MissingScorePolicy::kImputeWorst);
    REQUIRE(merged.hypotheses.size() == 3);
    CHECK(ranked_keys(merged) == std::vector<std::string>{"x", "y", "z"});
    // x has both models natively
    CHECK(merged.hypotheses[0].scores.at("tm") == doctest::Approx(-1.0));
    CHECK(merged.hypotheses[0].scores.at("lm") == doctest::Approx(-3.0));
    // y misses lm: imputed with min lm in the merged list (-5)
    CHECK(merged.hypotheses[1].scores.at("lm") == doctest::Approx(-5.0));
  }
  SUBCASE("drop removes incomplete hypotheses") {
    NBestList merged = fusion::merge_nbest({a, b}, MissingScorePolicy::kDrop);
    REQUIRE(merged.hypotheses.size() == 2);
    CHECK(ranked_keys(merged) == std::vector<std::string>{"x", "z"});
  }
}

TEST_CASE("merge is commutative up to first-occurrence order") {
  NBestList a{"0", {{{"x"}, {{"tm", -1.0}}}, {{"y"}, {{"tm", -2.0}}}}};
  NBestList b{"0", {{{"y"}, {{"lm", -3.0}}}, {{"z"}, {{"tm", -4.0}, {"lm", -5.0}}}}};

  NBestList ab = fusion::merge_nbest({a, b}, MissingScorePolicy::kImputeWorst);
  NBestList ba = fusion::merge_nbest({b, a}, MissingScorePolicy::kImputeWorst);
  REQUIRE(ab.hypotheses.size() == ba.hypotheses.size());
  for (const auto& hyp : ab.hypotheses) {
    bool found = false;
    for (const auto& other : ba.hypotheses) {
      if (other.tokens == hyp.tokens) {
        CHECK(other.scores == hyp.scores);
        found = true;
      }
    }
    CHECK(found);
  }
  CHECK(ranked_keys(ab) == std::vector<std::string>{"x", "y", "z"});
  CHECK(ranked_keys(ba) == std::vector<std::string>{"y", "z", "x"});
}

TEST_CASE("merge rejects mismatched ids") {
  NBestList a{"0", {{{"x"}, {{"tm", -1.0}}}}};
  NBestList b{"1", {{{"x"}, {{"tm", -1.0}}}}};
  CHECK_THROWS_AS(fusion::merge_nbest({a, b}, MissingScorePolicy::kDrop), Error);
}

TEST_CASE("set-level merge pairs sentences by id") {
  NBestSet a = fusion::parse_nbest("0 ||| x ||| tm=-1\n1 ||| y ||| tm=-2\n");
  NBestSet b = fusion::parse_nbest("1 ||| y ||| lm=-1\n0 ||| x ||| lm=-2\n");
  NBestSet merged =
      fusion::merge_nbest_sets({a, b}, MissingScorePolicy::kImputeWorst);
  REQUIRE(merged.lists.size() == 2);
  CHECK(merged.lists[0].sentence_id == "0");
  CHECK(merged.lists[0].hypotheses[0].scores.size() == 2);
}

TEST_CASE("length penalty values") {
  CHECK(fusion::length_penalty(1, 0.7) == doctest::Approx(1.0));
  CHECK(fusion::length_penalty(9, 0.0) == doctest::Approx(1.0));
  CHECK(std::abs(fusion::length_penalty(7, 0.6) - std::pow(2.0, 0.6)) < 1e-9);
}

TEST_CASE("rescore orders by weighted combined score") {
  NBestList list{"0",
                 {{{"a", "a", "a"}, {{"tm", -3.0}, {"lm", -1.0}}},
                  {{"b"}, {{"tm", -1.0}, {"lm", -4.0}}},
                  {{"c", "c"}, {{"tm", -2.0}, {"lm", -2.0}}}}};

  SUBCASE("single model, alpha 0, reproduces that model's order") {
    WeightVector w{{{"tm", 1.0}}, 0.0};
    CHECK(ranked_keys(fusion::rescore(list, w)) ==
          std::vector<std::string>{"b", "c c", "a a a"});
  }
  SUBCASE("hand-computed two-model ranking") {
    WeightVector w{{{"tm", 1.0}, {"lm", 2.0}}, 0.0};
    // combined: a=-5, b=-9, c=-6
    CHECK(ranked_keys(fusion::rescore(list, w)) ==
          std::vector<std::string>{"a a a", "c c", "b"});
  }
  SUBCASE("length penalty divides the combined score") {
    // negative scores: longer hypotheses divide by a larger penalty, which
    // *raises* their combined value toward zero
    WeightVector w{{{"tm", 1.0}, {"lm", 1.0}}, 5.0};
    auto ranked = fusion::rescore(list, w);
    double first = -4.0 / fusion::length_penalty(3, 5.0);
    double second = -4.0 / fusion::length_penalty(2, 5.0);
    CHECK(first > second);
    CHECK(ranked_keys(ranked)[0] == "a a a");
  }
}

TEST_CASE("rescore requires every weighted model") {
  NBestList list{"0", {{{"a"}, {{"tm", -1.0}}}}};
  WeightVector w{{{"tm", 1.0}, {"lm", 1.0}}, 0.0};
  CHECK_THROWS_AS(fusion::rescore(list, w), Error);
}

TEST_CASE("rescore ranking is invariant under positive weight scaling") {
  Rng rng(2718);
  for (int trial = 0; trial < 100; ++trial) {
    NBestList list{"0", {}};
    size_t n = 2 + rng.below(9);
    for (size_t h = 0; h < n; ++h) {
      Hypothesis hyp;
      size_t len = 1 + rng.below(6);
      for (size_t t = 0; t < len; ++t)
        hyp.tokens.push_back(std::string(1, static_cast<char>('a' + rng.below(26))));
      hyp.scores["tm"] = rng.uniform() * -10.0;
      hyp.scores["lm"] = rng.uniform() * -10.0;
      hyp.scores["e2e"] = rng.uniform() * -10.0;
      list.hypotheses.push_back(std::move(hyp));
    }
    WeightVector w{{{"tm", rng.uniform() + 0.1},
                    {"lm", rng.uniform() + 0.1},
                    {"e2e", rng.uniform() + 0.1}},
                   0.6};
    double c = 0.5 + rng.uniform() * 9.5;
    WeightVector scaled = w;
    for (auto& [name, weight] : scaled.model_weights) weight *= c;

    CAPTURE(trial);
    REQUIRE(ranked_keys(fusion::rescore(list, w)) ==
            ranked_keys(fusion::rescore(list, scaled)));
  }
}

TEST_CASE("rescore ties keep input order") {
  NBestList list{"0",
                 {{{"first"}, {{"tm", -1.0}}},
                  {{"second"}, {{"tm", -1.0}}},
                  {{"third"}, {{"tm", -0.5}}}}};
  WeightVector w{{{"tm", 1.0}}, 0.0};
  CHECK(ranked_keys(fusion::rescore(list, w)) ==
        std::vector<std::string>{"third", "first", "second"});
}

TEST_CASE("weights text round trip and validation") {
  WeightVector w{{{"lm", 0.5}, {"tm", 1.0}}, 0.6};
  std::string text = w.format();
  CHECK(text == "lm\t0.5\ntm\t1\nalpha\t0.6\n");
  WeightVector parsed = WeightVector::parse(text);
  CHECK(parsed.alpha == doctest::Approx(0.6));
  CHECK(parsed.model_weights.at("tm") == doctest::Approx(1.0));

  CHECK_THROWS_AS(WeightVector::parse("alpha\t0.6\n"), Error);  // no models
  CHECK_THROWS_AS(WeightVector::parse("tm\t0\n"), Error);       // all zero
  CHECK_THROWS_AS(WeightVector::parse("tm 1\n"), Error);        // no tab
}

TEST_CASE("grid tuner recovers planted oracle weights") {
  // Model "good" scores the reference-matching hypothesis highest; model
  // "bad" prefers a wrong one. Only weights (good=1, bad=0) rank every
  // reference top.
  NBestSet dev;
  metrics::SegmentedText refs;
  const char* sentences[] = {"the cat sat on the mat", "dogs bark loudly at night",
                             "it rains in the spring"};
  const char* wrong[] = {"a cat stood on a log", "dogs sleep quietly all day",
                         "it pours in the autumn"};
  for (int i = 0; i < 3; ++i) {
    NBestList list{std::to_string(i), {}};
    Hypothesis correct{split_tokens(sentences[i]), {{"good", 0.0}, {"bad", 0.0}}};
    Hypothesis other{split_tokens(wrong[i]), {{"good", -1.0}, {"bad", 5.0}}};
    list.hypotheses.push_back(other);  // wrong one first
    list.hypotheses.push_back(correct);
    dev.lists.push_back(list);
    refs.segments.push_back(split_tokens(sentences[i]));
  }

  fusion::Grid grid{{"good", {0.0, 1.0}}, {"bad", {0.0, 1.0}}};
  WeightVector best = fusion::tune_weights_grid(dev, refs, grid, {0.0});
  CHECK(best.model_weights.at("good") == doctest::Approx(1.0));
  CHECK(best.model_weights.at("bad") == doctest::Approx(0.0));
}

TEST_CASE("grid tuner returns a single point unchanged") {
  NBestSet dev;
  NBestList list{"0", {{{"a"}, {{"tm", -1.0}}}}};
  dev.lists.push_back(list);
  metrics::SegmentedText refs;
  refs.segments.push_back({"a"});

  WeightVector best =
      fusion::tune_weights_grid(dev, refs, {{"tm", {0.25}}}, {0.6});
  CHECK(best.model_weights.at("tm") == doctest::Approx(0.25));
  CHECK(best.alpha == doctest::Approx(0.6));
}

TEST_CASE("grid tuner validation") {
  NBestSet dev;
  dev.lists.push_back({"0", {{{"a"}, {{"tm", -1.0}}}}});
  metrics::SegmentedText refs;
  refs.segments.push_back({"a"});

  CHECK_THROWS_AS(fusion::tune_weights_grid(dev, refs, {}, {0.0}), Error);
  CHECK_THROWS_AS(fusion::tune_weights_grid(dev, refs, {{"tm", {}}}, {0.0}),
                  Error);
  CHECK_THROWS_AS(fusion::tune_weights_grid(dev, refs, {{"tm", {1.0}}}, {}),
                  Error);

  metrics::SegmentedText bad_refs;
  CHECK_THROWS_AS(
      fusion::tune_weights_grid(dev, bad_refs, {{"tm", {1.0}}}, {0.0}), Error);

  // a grid offering only the all-zero point is effectively empty
  CHECK_THROWS_AS(fusion::tune_weights_grid(dev, refs, {{"tm", {0.0}}}, {0.0}),
                  Error);
}

TEST_CASE("grid tuner skips the all-zero point") {
  NBestSet dev;
  NBestList list{"0", {}};
  list.hypotheses.push_back({split_tokens("the cat sat on the mat"),
                             {{"tm", 0.0}}});
  list.hypotheses.push_back({split_tokens("a cat sat on a mat"),
                             {{"tm", 1.0}}});
  dev.lists.push_back(list);
  metrics::SegmentedText refs;
  refs.segments.push_back(split_tokens("the cat sat on the mat"));

  // at tm=0 the stable order would put the reference on top (BLEU 100), but
  // that point is skipped; tm=1 prefers the wrong hypothesis, so the tuner
  // returns tm=1 with its sub-100 score rather than the invalid zero vector
  WeightVector best =
      fusion::tune_weights_grid(dev, refs, {{"tm", {0.0, 1.0}}}, {0.0});
  CHECK(best.model_weights.at("tm") == doctest::Approx(1.0));
}
