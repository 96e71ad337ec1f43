#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "stkit/stkit.h"

namespace {

struct StringOut {
  char* value = nullptr;
  ~StringOut() { stk_string_free(value); }
  std::string str() const { return value ? value : ""; }
};

}  // namespace

TEST_CASE("c api error codes carry names and messages") {
  stk_audio* audio = nullptr;
  stk_status s = stk_wav_parse("RIFX....WAVE", 12, &audio);
  CHECK(s == STK_ERR_NOT_RIFF);
  CHECK(std::string(stk_status_name(s)) == "NotRiff");
  CHECK(std::strlen(stk_last_error()) > 0);
  CHECK(audio == nullptr);

  CHECK(stk_wav_parse(nullptr, 0, &audio) == STK_ERR_INVALID_ARGUMENT);
}

TEST_CASE("c api audio round trip and duration") {
  const float samples[] = {0.0f, 0.5f, -0.25f, 0.125f};
  stk_audio* audio = nullptr;
  REQUIRE(stk_audio_create(samples, 4, 16000, &audio) == STK_OK);
  CHECK(stk_audio_num_samples(audio) == 4);
  CHECK(stk_audio_sample_rate(audio) == 16000);
  CHECK(stk_audio_duration_s(audio) == doctest::Approx(4.0 / 16000.0));

  void* bytes = nullptr;
  size_t len = 0;
  REQUIRE(stk_wav_render(audio, &bytes, &len) == STK_OK);
  CHECK(len == 44 + 8);

  stk_audio* parsed = nullptr;
  REQUIRE(stk_wav_parse(bytes, len, &parsed) == STK_OK);
  REQUIRE(stk_audio_num_samples(parsed) == 4);
  const float* out = stk_audio_samples(parsed);
  for (int i = 0; i < 4; ++i) CHECK(out[i] == doctest::Approx(samples[i]));

  stk_buffer_free(bytes);
  stk_audio_free(parsed);
  stk_audio_free(audio);
}

TEST_CASE("c api vad and splice") {
  std::vector<float> samples(3000, 0.0f);
  for (int i = 0; i < 1000; ++i) samples[i] = 0.5f;
  for (int i = 2000; i < 3000; ++i) samples[i] = 0.5f;
  stk_audio* audio = nullptr;
  REQUIRE(stk_audio_create(samples.data(), samples.size(), 1000, &audio) ==
          STK_OK);

  stk_fragments* fragments = nullptr;
  REQUIRE(stk_audio_energy_vad(audio, 25.0, 0.01, 1, &fragments) == STK_OK);
  REQUIRE(stk_fragments_count(fragments) == 2);
  double start = 0, end = 0;
  REQUIRE(stk_fragments_get(fragments, 1, &start, &end) == STK_OK);
  CHECK(start == doctest::Approx(2.0).epsilon(0.05));

  stk_splice_groups* groups = nullptr;
  REQUIRE(stk_fragments_splice(fragments, 10.0, &groups) == STK_OK);
  CHECK(stk_splice_groups_count(groups) == 1);  // 2 s total, under min
  CHECK(stk_splice_group_size(groups, 0) == 2);

  StringOut text;
  REQUIRE(stk_fragments_format(fragments, &text.value) == STK_OK);
  stk_fragments* reparsed = nullptr;
  REQUIRE(stk_fragments_parse(text.value, &reparsed) == STK_OK);
  CHECK(stk_fragments_count(reparsed) == 2);

  stk_fragments_free(reparsed);
  stk_splice_groups_free(groups);
  stk_fragments_free(fragments);
  stk_audio_free(audio);
}

TEST_CASE("c api textnorm") {
  StringOut words;
  REQUIRE(stk_number_to_words("42", &words.value) == STK_OK);
  CHECK(words.str() == "forty two");

  StringOut bad;
  CHECK(stk_number_to_words("x1", &bad.value) == STK_ERR_NOT_A_NUMBER);
  CHECK(stk_number_to_words("1000000000000000", &bad.value) == STK_ERR_TOO_LARGE);

  StringOut spoken;
  REQUIRE(stk_normalize_spoken("It's 2 PM.", &spoken.value) == STK_OK);
  CHECK(spoken.str() == "it's two pm");

  CHECK(stk_is_spoken_form("hello world") == 1);
  CHECK(stk_is_spoken_form("Hello") == 0);
  CHECK(stk_is_spoken_form("two 2") == 0);
}

TEST_CASE("c api corruption") {
  stk_homophones* table = nullptr;
  REQUIRE(stk_homophones_parse("two\tto\n", &table) == STK_OK);

  stk_corrupt_params params = {1.0, 0.0, 0.0, 0.0, 7};
  StringOut out;
  REQUIRE(stk_corrupt("two percent", table, &params, nullptr, &out.value) ==
          STK_OK);
  CHECK(out.str() == "to percent");

  stk_corrupt_params invalid = {0.8, 0.8, 0.0, 0.0, 7};
  StringOut bad;
  CHECK(stk_corrupt("two", table, &invalid, nullptr, &bad.value) ==
        STK_ERR_INVALID_ARGUMENT);

  StringOut bitext;
  stk_corrupt_params identity = {0.0, 0.0, 0.0, 0.0, 1};
  REQUIRE(stk_augment_bitext("Hello, World!\tHallo Welt!\n", table, &identity,
                             nullptr, &bitext.value) == STK_OK);
  CHECK(bitext.str() == "hello world\tHallo Welt!\n");

  stk_homophones_free(table);
}

TEST_CASE("c api segmenter round trip") {
  std::string paragraphs;
  for (int i = 0; i < 30; ++i)
    paragraphs += "some words stop. more words stop. tail words stop.\n";

  stk_boundary_model* model = nullptr;
  REQUIRE(stk_boundary_train(paragraphs.c_str(), 1, 30, 0.5, 11, &model) ==
          STK_OK);

  StringOut serialized;
  REQUIRE(stk_boundary_model_format(model, &serialized.value) == STK_OK);
  stk_boundary_model* reparsed = nullptr;
  REQUIRE(stk_boundary_model_parse(serialized.value, &reparsed) == STK_OK);

  StringOut segments;
  REQUIRE(stk_segment(reparsed, "one two stop three four stop", 1, 10,
                      &segments.value) == STK_OK);
  CHECK(segments.str() == "one two stop\nthree four stop\n");

  stk_boundary_model_free(reparsed);
  stk_boundary_model_free(model);
}

TEST_CASE("c api corpus filters") {
  StringOut dedup;
  REQUIRE(stk_bitext_dedup("a\tb\na\tb\na\tc\n", &dedup.value) == STK_OK);
  CHECK(dedup.str() == "a\tb\na\tc\n");

  StringOut kept;
  REQUIRE(stk_filter_outlier_scores("a\t0\nb\t0\nc\t0\nd\t0\ne\t100\n", 1.9,
                                    &kept.value) == STK_OK);
  CHECK(kept.str() == "a\nb\nc\nd\n");

  StringOut few;
  CHECK(stk_filter_outlier_scores("a\t0\n", 2.0, &few.value) == STK_ERR_TOO_FEW);
}

TEST_CASE("c api lexicon and similarity") {
  const char* bitext =
      "the dog\tder hund\nthe cat\tdie katze\na dog\tein hund\na cat\tein katze\n";
  stk_lexicon* forward = nullptr;
  REQUIRE(stk_lexicon_train(bitext, 5, 0, &forward) == STK_OK);

  double matched = 0, mismatched = 0;
  REQUIRE(stk_similarity("the dog", "der hund", forward, nullptr, &matched) ==
          STK_OK);
  REQUIRE(stk_similarity("the dog", "ein katze", forward, nullptr,
                         &mismatched) == STK_OK);
  CHECK(matched > mismatched);

  StringOut serialized;
  REQUIRE(stk_lexicon_format(forward, &serialized.value) == STK_OK);
  stk_lexicon* reparsed = nullptr;
  REQUIRE(stk_lexicon_parse(serialized.value, &reparsed) == STK_OK);
  double again = 0;
  REQUIRE(stk_similarity("the dog", "der hund", reparsed, nullptr, &again) ==
          STK_OK);
  CHECK(again == doctest::Approx(matched));

  stk_lexicon_free(reparsed);
  stk_lexicon_free(forward);
}

TEST_CASE("c api metrics") {
  int64_t distance = 0, subs = 0, dels = 0, ins = 0;
  REQUIRE(stk_edit_distance("a b c d", "a x c", &distance, &subs, &dels, &ins) ==
          STK_OK);
  CHECK(distance == 2);
  CHECK(subs == 1);
  CHECK(dels == 1);

  double w = 0;
  REQUIRE(stk_wer("a b c d", "a x c", &w) == STK_OK);
  CHECK(w == doctest::Approx(0.5));
  CHECK(stk_wer("", "a", &w) == STK_ERR_EMPTY_REFERENCE);

  stk_score_report report;
  REQUIRE(stk_bleu("the cat sat on the mat\n", "the cat sat on the mat\n", 1,
                   &report) == STK_OK);
  CHECK(report.bleu == 100.0);

  StringOut block;
  REQUIRE(stk_score_report_format(&report, &block.value) == STK_OK);
  CHECK(block.str().find("bleu = 100.0000") != std::string::npos);
}

TEST_CASE("c api realignment invariance over pre-segmentations") {
  const char* refs = "the cat sat on the mat\nit was very good\n";
  const char* flows[] = {
      "the cat sat on a mat it was it good",
      "the cat sat\non a mat it was it good",
      "the cat\nsat on a\nmat it was it good",
      "the\ncat\nsat\non\na\nmat\nit\nwas\nit\ngood",
  };
  stk_score_report base;
  REQUIRE(stk_score_speech_translation(flows[0], refs, 1, &base, nullptr) ==
          STK_OK);
  for (const char* flow : flows) {
    stk_score_report report;
    CAPTURE(flow);
    REQUIRE(stk_score_speech_translation(flow, refs, 1, &report, nullptr) ==
            STK_OK);
    CHECK(report.bleu == base.bleu);
    CHECK(report.wer == base.wer);
  }

  StringOut segments;
  stk_score_report report;
  REQUIRE(stk_score_speech_translation(
              "the cat sat on the mat it was very good", refs, 1, &report,
              &segments.value) == STK_OK);
  CHECK(report.bleu == 100.0);
  CHECK(segments.str() == "the cat sat on the mat\nit was very good\n");
}

TEST_CASE("c api ctm") {
  StringOut segments;
  REQUIRE(stk_ctm_to_segments(
              "u1 1 0.0 0.5 hello\nu1 1 0.6 0.2 world\nu2 1 0.0 0.3 bye\n",
              &segments.value) == STK_OK);
  CHECK(segments.str() == "hello world\nbye\n");
}

TEST_CASE("c api fusion pipeline") {
  stk_nbest* a = nullptr;
  stk_nbest* b = nullptr;
  REQUIRE(stk_nbest_parse(
              "0 ||| x a b c d ||| tm=-1\n0 ||| z a b c d ||| tm=-2\n", &a) ==
          STK_OK);
  REQUIRE(stk_nbest_parse(
              "0 ||| z a b c d ||| lm=-1\n0 ||| w a b c d ||| lm=-5\n", &b) ==
          STK_OK);

  const stk_nbest* sets[] = {a, b};
  stk_nbest* merged = nullptr;
  REQUIRE(stk_nbest_merge(sets, 2, STK_MERGE_IMPUTE_WORST, &merged) == STK_OK);
  // merged scores: "x ..." tm=-1 lm=-5 (imputed), "z ..." tm=-2 lm=-1,
  //                "w ..." tm=-2 (imputed) lm=-5

  stk_weights* weights = nullptr;
  REQUIRE(stk_weights_parse("tm\t1\nlm\t1\nalpha\t0\n", &weights) == STK_OK);

  stk_nbest* ranked = nullptr;
  REQUIRE(stk_nbest_rescore(merged, weights, &ranked) == STK_OK);
  StringOut top1;
  REQUIRE(stk_nbest_top1(ranked, &top1.value) == STK_OK);
  CHECK(top1.str() == "z a b c d\n");  // -3 beats -6 and -7

  // only lm alone ranks the reference first; the first winning grid point in
  // iteration order is lm=1, tm=0
  stk_weights* tuned = nullptr;
  REQUIRE(stk_tune_grid(merged, "z a b c d\n", "tm=0,1;lm=0,1", "0", &tuned) ==
          STK_OK);
  StringOut tuned_text;
  REQUIRE(stk_weights_format(tuned, &tuned_text.value) == STK_OK);
  CHECK(tuned_text.str() == "lm\t1\ntm\t0\nalpha\t0\n");

  CHECK(stk_length_penalty(7, 0.6) == doctest::Approx(std::pow(2.0, 0.6)));

  stk_weights_free(tuned);
  stk_weights_free(weights);
  stk_nbest_free(ranked);
  stk_nbest_free(merged);
  stk_nbest_free(b);
  stk_nbest_free(a);
}
