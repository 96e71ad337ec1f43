#include <doctest.h>

#include <cmath>

#include "error.hpp"
#include "oracles.hpp"
#include "rng.hpp"
#include "segmenter.hpp"
#include "textutil.hpp"

using namespace stkit;
using segmenter::BoundaryExample;
using segmenter::BoundaryModel;

namespace {

// Model scoring positions purely from a fixed lookup: probability high at
// planted positions, low elsewhere. Built through window features on a
// synthetic marker token.
BoundaryModel oracle_model(double boost) {
  std::unordered_map<std::string, double> weights;
  weights["-1:cut"] = boost;
  return BoundaryModel(1, -boost / 2.0, std::move(weights));
}

}  // namespace

TEST_CASE("extract_training_examples labels from sentence punctuation") {
  auto examples = segmenter::extract_training_examples({"Hi. Go now."}, 1);
  // positions: after "hi" (boundary), after "go" (not); terminal "." ignored
  REQUIRE(examples.size() == 2);
  CHECK(examples[0].boundary);
  CHECK(examples[0].features ==
        std::vector<std::string>{"-1:hi", "+1:go"});
  CHECK_FALSE(examples[1].boundary);
  CHECK(examples[1].features ==
        std::vector<std::string>{"-1:go", "+1:now"});
}

TEST_CASE("extract handles multi-mark and unpunctuated paragraphs") {
  auto none = segmenter::extract_training_examples({"just some words here"}, 1);
  REQUIRE(none.size() == 3);
  for (const auto& ex : none) CHECK_FALSE(ex.boundary);

  auto multi = segmenter::extract_training_examples({"Really?! Yes. Ok"}, 1);
  REQUIRE(multi.size() == 2);
  CHECK(multi[0].boundary);   // after "really"
  CHECK(multi[1].boundary);   // after "yes"
}

TEST_CASE("extract computes features on the spoken stream") {
  // "2 PM." normalizes to "two pm", so the boundary context is spoken-form
  auto examples = segmenter::extract_training_examples({"At 2 PM. Go."}, 2);
  bool found = false;
  for (const auto& ex : examples) {
    if (ex.boundary) {
      found = true;
      CHECK(ex.features == std::vector<std::string>{"-2:two", "-1:pm", "+1:go",
                                                    "+2:<pad>"});
    }
  }
  CHECK(found);
}

TEST_CASE("extract skips degenerate paragraphs") {
  CHECK(segmenter::extract_training_examples({""}, 1).empty());
  CHECK(segmenter::extract_training_examples({"word"}, 1).empty());
  // punctuation-only tokens collapse onto the neighboring position
  auto collapsed = segmenter::extract_training_examples({"Stop ! now"}, 1);
  REQUIRE(collapsed.size() == 1);
  CHECK(collapsed[0].boundary);
}

TEST_CASE("training needs both labels") {
  auto ex = segmenter::extract_training_examples({"no punctuation here at all"}, 1);
  CHECK_THROWS_AS(segmenter::train_boundary_model(ex, 5, 0.1, 1), Error);
}

namespace {

// Paragraphs where a sentence ends exactly after the token "stop".
std::vector<std::string> planted_corpus(uint64_t seed, int paragraphs) {
  const char* filler[] = {"alpha", "beta", "gamma", "delta", "epsilon",
                          "zeta", "eta", "theta"};
  Rng rng(seed);
  std::vector<std::string> out;
  for (int p = 0; p < paragraphs; ++p) {
    std::string paragraph;
    int sentences = 2 + static_cast<int>(rng.below(3));
    for (int s = 0; s < sentences; ++s) {
      int len = 1 + static_cast<int>(rng.below(5));
      for (int w = 0; w < len; ++w) {
        paragraph += filler[rng.below(8)];
        paragraph += ' ';
      }
      paragraph += "stop. ";
    }
    out.push_back(paragraph);
  }
  return out;
}

}  // namespace

TEST_CASE("training separates a planted linear rule perfectly") {
  auto train_examples = segmenter::extract_training_examples(
      planted_corpus(100, 40), 1);
  auto held_out = segmenter::extract_training_examples(
      planted_corpus(200, 10), 1);

  BoundaryModel model =
      segmenter::train_boundary_model(train_examples, 50, 0.5, 7);

  int correct = 0;
  for (const auto& ex : held_out) {
    bool predicted = model.predict(ex.features) > 0.5;
    if (predicted == ex.boundary) ++correct;
  }
  CHECK(correct == static_cast<int>(held_out.size()));
}

TEST_CASE("training is deterministic per seed") {
  auto examples = segmenter::extract_training_examples(planted_corpus(1, 10), 1);
  BoundaryModel a = segmenter::train_boundary_model(examples, 10, 0.3, 5);
  BoundaryModel b = segmenter::train_boundary_model(examples, 10, 0.3, 5);
  CHECK(a.format() == b.format());
}

TEST_CASE("epoch losses never increase") {
  auto examples = segmenter::extract_training_examples(planted_corpus(2, 20), 2);
  std::vector<double> losses;
  segmenter::train_boundary_model(examples, 20, 1.0, 3, &losses);
  REQUIRE(!losses.empty());
  for (size_t i = 1; i < losses.size(); ++i) {
    CAPTURE(i);
    CHECK(losses[i] <= losses[i - 1]);
  }
}

TEST_CASE("model text round trip") {
  auto examples = segmenter::extract_training_examples(planted_corpus(3, 5), 1);
  BoundaryModel model = segmenter::train_boundary_model(examples, 5, 0.2, 11);
  BoundaryModel reparsed = BoundaryModel::parse(model.format());
  CHECK(reparsed.format() == model.format());
  CHECK(reparsed.window() == model.window());

  CHECK_THROWS_AS(BoundaryModel::parse(""), Error);
  CHECK_THROWS_AS(BoundaryModel::parse("bias\t0.0\n"), Error);  // no window
}

TEST_CASE("segment recovers planted boundaries under an oracle model") {
  BoundaryModel model = oracle_model(50.0);
  // "cut" marks where segments end
  textnorm::SpokenText tokens = {"a", "b", "cut", "c", "d", "e", "cut", "f"};
  auto out = segmenter::segment(tokens, model, 1, 8);
  REQUIRE(out.segments.size() == 3);
  CHECK(out.segments[0] == metrics::Tokens{"a", "b", "cut"});
  CHECK(out.segments[1] == metrics::Tokens{"c", "d", "e", "cut"});
  CHECK(out.segments[2] == metrics::Tokens{"f"});
}

TEST_CASE("segment with no boundary evidence gives one segment") {
  BoundaryModel model = oracle_model(50.0);
  textnorm::SpokenText tokens = {"a", "b", "c", "d"};
  auto out = segmenter::segment(tokens, model, 1, 4);
  REQUIRE(out.segments.size() == 1);
  CHECK(out.segments[0].size() == 4);
}

TEST_CASE("segment validates lengths") {
  BoundaryModel model = oracle_model(1.0);
  textnorm::SpokenText tokens = {"a", "b"};
  CHECK_THROWS_AS(segmenter::segment(tokens, model, 3, 2), Error);
  CHECK_THROWS_AS(segmenter::segment({}, model, 1, 2), Error);
}

TEST_CASE("segment respects length bounds with final exemption") {
  BoundaryModel model = oracle_model(10.0);
  textnorm::SpokenText tokens(11, "w");
  auto out = segmenter::segment(tokens, model, 3, 4);
  size_t total = 0;
  for (size_t i = 0; i < out.segments.size(); ++i) {
    CHECK(out.segments[i].size() <= 4);
    if (i + 1 < out.segments.size()) CHECK(out.segments[i].size() >= 3);
    total += out.segments[i].size();
  }
  CHECK(total == tokens.size());

  // infeasible strict case: 2 tokens, min 3 -> single short final segment
  textnorm::SpokenText two(2, "w");
  auto exempt = segmenter::segment(two, model, 3, 4);
  REQUIRE(exempt.segments.size() == 1);
  CHECK(exempt.segments[0].size() == 2);
}

TEST_CASE("segment DP equals exhaustive enumeration") {
  Rng rng(606);
  const char* vocab[] = {"a", "b", "c", "d", "e"};
  for (int trial = 0; trial < 200; ++trial) {
    size_t n = 2 + rng.below(11);  // up to 12 tokens
    textnorm::SpokenText tokens;
    for (size_t i = 0; i < n; ++i) tokens.push_back(vocab[rng.below(5)]);

    // random model over the same vocab
    std::unordered_map<std::string, double> weights;
    for (const char* w : vocab) {
      weights[std::string("-1:") + w] = rng.uniform() * 4.0 - 2.0;
      weights[std::string("+1:") + w] = rng.uniform() * 4.0 - 2.0;
    }
    BoundaryModel model(1, rng.uniform() * 2.0 - 1.0, std::move(weights));

    size_t min_len = 1 + rng.below(3);
    size_t max_len = min_len + rng.below(6);

    auto out = segmenter::segment(tokens, model, static_cast<int>(min_len),
                                  static_cast<int>(max_len));

    // concatenation invariant
    metrics::Tokens flat;
    for (const auto& seg : out.segments)
      flat.insert(flat.end(), seg.begin(), seg.end());
    REQUIRE(flat == tokens);

    // objective of the returned segmentation
    std::vector<double> log_b(n, 0.0), log_nb(n, 0.0);
    for (size_t i = 1; i < n; ++i) {
      double p = model.predict(segmenter::window_features(tokens, i, 1));
      log_b[i] = std::log(p);
      log_nb[i] = std::log(1.0 - p);
    }
    double score = 0.0;
    size_t pos = 0;
    std::vector<bool> is_cut(n, false);
    for (size_t s = 0; s + 1 < out.segments.size(); ++s) {
      pos += out.segments[s].size();
      is_cut[pos] = true;
    }
    for (size_t i = 1; i < n; ++i) score += is_cut[i] ? log_b[i] : log_nb[i];

    auto best = oracles::best_segmentation(log_b, log_nb, n, min_len, max_len);
    CAPTURE(trial);
    REQUIRE(best.feasible);
    REQUIRE(score == doctest::Approx(best.score).epsilon(1e-9));
  }
}
