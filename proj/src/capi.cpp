#include "stkit/stkit.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "audio.hpp"
#include "augment.hpp"
#include "corpusops.hpp"
#include "error.hpp"
#include "fusion.hpp"
#include "metrics.hpp"
#include "rng.hpp"
#include "segmenter.hpp"
#include "textnorm.hpp"
#include "textutil.hpp"

using namespace stkit;

extern "C" {

struct stk_audio {
  audio::AudioSignal signal;
};
struct stk_fragments {
  std::vector<audio::Fragment> fragments;
};
struct stk_splice_groups {
  std::vector<std::vector<audio::Fragment>> groups;
};
struct stk_homophones {
  augment::HomophoneTable table;
};
struct stk_boundary_model {
  segmenter::BoundaryModel model;
};
struct stk_lexicon {
  corpusops::LexiconModel model;
};
struct stk_nbest {
  fusion::NBestSet set;
};
struct stk_weights {
  fusion::WeightVector weights;
};

}  // extern "C"

namespace {

thread_local std::string g_last_error;

stk_status map_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotRiff: return STK_ERR_NOT_RIFF;
    case ErrorCode::UnsupportedFormat: return STK_ERR_UNSUPPORTED_FORMAT;
    case ErrorCode::Truncated: return STK_ERR_TRUNCATED;
    case ErrorCode::BadFactor: return STK_ERR_BAD_FACTOR;
    case ErrorCode::SilentSignal: return STK_ERR_SILENT_SIGNAL;
    case ErrorCode::BadFrame: return STK_ERR_BAD_FRAME;
    case ErrorCode::NotANumber: return STK_ERR_NOT_A_NUMBER;
    case ErrorCode::TooLarge: return STK_ERR_TOO_LARGE;
    case ErrorCode::DegenerateLabels: return STK_ERR_DEGENERATE_LABELS;
    case ErrorCode::Infeasible: return STK_ERR_INFEASIBLE;
    case ErrorCode::EmptyCorpus: return STK_ERR_EMPTY_CORPUS;
    case ErrorCode::EmptySide: return STK_ERR_EMPTY_SIDE;
    case ErrorCode::TooFew: return STK_ERR_TOO_FEW;
    case ErrorCode::EmptyReference: return STK_ERR_EMPTY_REFERENCE;
    case ErrorCode::LengthMismatch: return STK_ERR_LENGTH_MISMATCH;
    case ErrorCode::MalformedLine: return STK_ERR_MALFORMED_LINE;
    case ErrorCode::IdMismatch: return STK_ERR_ID_MISMATCH;
    case ErrorCode::MissingScore: return STK_ERR_MISSING_SCORE;
    case ErrorCode::GridEmpty: return STK_ERR_GRID_EMPTY;
    case ErrorCode::RefMismatch: return STK_ERR_REF_MISMATCH;
    case ErrorCode::InvalidArgument: return STK_ERR_INVALID_ARGUMENT;
  }
  return STK_ERR_INTERNAL;
}

template <typename Fn>
stk_status guarded(Fn&& fn) {
  try {
    fn();
    return STK_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return STK_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return STK_ERR_INTERNAL;
  }
}

stk_status require(bool ok, const char* message) {
  if (ok) return STK_OK;
  g_last_error = message;
  return STK_ERR_INVALID_ARGUMENT;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

textnorm::SpokenText to_tokens(const char* s) {
  return split_tokens(s ? s : "");
}

metrics::SegmentedText to_segments(const char* lines) {
  return metrics::parse_segments(lines ? lines : "");
}

}  // namespace

extern "C" {

const char* stk_status_name(stk_status status) {
  switch (status) {
    case STK_OK: return "OK";
    case STK_ERR_NOT_RIFF: return "NotRiff";
    case STK_ERR_UNSUPPORTED_FORMAT: return "UnsupportedFormat";
    case STK_ERR_TRUNCATED: return "Truncated";
    case STK_ERR_BAD_FACTOR: return "BadFactor";
    case STK_ERR_SILENT_SIGNAL: return "SilentSignal";
    case STK_ERR_BAD_FRAME: return "BadFrame";
    case STK_ERR_NOT_A_NUMBER: return "NotANumber";
    case STK_ERR_TOO_LARGE: return "TooLarge";
    case STK_ERR_DEGENERATE_LABELS: return "DegenerateLabels";
    case STK_ERR_INFEASIBLE: return "Infeasible";
    case STK_ERR_EMPTY_CORPUS: return "EmptyCorpus";
    case STK_ERR_EMPTY_SIDE: return "EmptySide";
    case STK_ERR_TOO_FEW: return "TooFew";
    case STK_ERR_EMPTY_REFERENCE: return "EmptyReference";
    case STK_ERR_LENGTH_MISMATCH: return "LengthMismatch";
    case STK_ERR_MALFORMED_LINE: return "MalformedLine";
    case STK_ERR_ID_MISMATCH: return "IdMismatch";
    case STK_ERR_MISSING_SCORE: return "MissingScore";
    case STK_ERR_GRID_EMPTY: return "GridEmpty";
    case STK_ERR_REF_MISMATCH: return "RefMismatch";
    case STK_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case STK_ERR_INTERNAL: return "Internal";
  }
  return "Unknown";
}

const char* stk_last_error(void) { return g_last_error.c_str(); }

const char* stk_version(void) { return "0.1.0"; }

void stk_string_free(char* s) { std::free(s); }
void stk_buffer_free(void* p) { std::free(p); }

uint64_t stk_derive_seed(uint64_t seed, const char* label) {
  return derive_seed(seed, label ? label : "");
}

/* ---------------- audio ---------------- */

stk_status stk_wav_parse(const void* bytes, size_t len, stk_audio** out) {
  if (stk_status s = require(bytes && out, "bytes and out must be non-null"))
    return s;
  return guarded([&] {
    const uint8_t* p = static_cast<const uint8_t*>(bytes);
    std::vector<uint8_t> buf(p, p + len);
    *out = new stk_audio{audio::parse_wav(buf)};
  });
}

stk_status stk_wav_render(const stk_audio* a, void** bytes_out, size_t* len_out) {
  if (stk_status s = require(a && bytes_out && len_out, "null argument"))
    return s;
  return guarded([&] {
    std::vector<uint8_t> bytes = audio::write_wav(a->signal);
    void* buf = std::malloc(bytes.size());
    if (!buf) throw std::bad_alloc();
    std::memcpy(buf, bytes.data(), bytes.size());
    *bytes_out = buf;
    *len_out = bytes.size();
  });
}

stk_status stk_audio_create(const float* samples, size_t count,
                            int sample_rate_hz, stk_audio** out) {
  if (stk_status s = require(out && (samples || count == 0), "null argument"))
    return s;
  if (stk_status s = require(sample_rate_hz > 0, "sample rate must be positive"))
    return s;
  return guarded([&] {
    audio::AudioSignal signal;
    signal.sample_rate_hz = sample_rate_hz;
    if (count > 0) signal.samples.assign(samples, samples + count);
    *out = new stk_audio{std::move(signal)};
  });
}

size_t stk_audio_num_samples(const stk_audio* a) {
  return a ? a->signal.samples.size() : 0;
}

int stk_audio_sample_rate(const stk_audio* a) {
  return a ? a->signal.sample_rate_hz : 0;
}

double stk_audio_duration_s(const stk_audio* a) {
  return a ? a->signal.duration_s() : 0.0;
}

const float* stk_audio_samples(const stk_audio* a) {
  return a ? a->signal.samples.data() : nullptr;
}

void stk_audio_free(stk_audio* a) { delete a; }

stk_status stk_audio_speed_perturb(const stk_audio* a, double factor,
                                   stk_audio** out) {
  if (stk_status s = require(a && out, "null argument")) return s;
  return guarded([&] {
    *out = new stk_audio{audio::speed_perturb(a->signal, factor)};
  });
}

stk_status stk_audio_add_noise(const stk_audio* a, double snr_db, uint64_t seed,
                               stk_audio** out) {
  if (stk_status s = require(a && out, "null argument")) return s;
  return guarded([&] {
    *out = new stk_audio{audio::add_noise(a->signal, snr_db, seed)};
  });
}

stk_status stk_audio_energy_vad(const stk_audio* a, double frame_ms,
                                double energy_threshold, int min_gap_frames,
                                stk_fragments** out) {
  if (stk_status s = require(a && out, "null argument")) return s;
  return guarded([&] {
    *out = new stk_fragments{
        audio::energy_vad(a->signal, frame_ms, energy_threshold, min_gap_frames)};
  });
}

size_t stk_fragments_count(const stk_fragments* f) {
  return f ? f->fragments.size() : 0;
}

stk_status stk_fragments_get(const stk_fragments* f, size_t index,
                             double* start_s, double* end_s) {
  if (stk_status s = require(f && start_s && end_s, "null argument")) return s;
  if (stk_status s = require(index < f->fragments.size(), "index out of range"))
    return s;
  *start_s = f->fragments[index].start_s;
  *end_s = f->fragments[index].end_s;
  return STK_OK;
}

stk_status stk_fragments_format(const stk_fragments* f, char** out) {
  if (stk_status s = require(f && out, "null argument")) return s;
  return guarded([&] { *out = dup_string(audio::format_fragments(f->fragments)); });
}

stk_status stk_fragments_parse(const char* text, stk_fragments** out) {
  if (stk_status s = require(text && out, "null argument")) return s;
  return guarded([&] {
    *out = new stk_fragments{audio::parse_fragments(text)};
  });
}

void stk_fragments_free(stk_fragments* f) { delete f; }

stk_status stk_fragments_splice(const stk_fragments* f, double min_s,
                                stk_splice_groups** out) {
  if (stk_status s = require(f && out, "null argument")) return s;
  return guarded([&] {
    *out = new stk_splice_groups{audio::splice_min_duration(f->fragments, min_s)};
  });
}

size_t stk_splice_groups_count(const stk_splice_groups* g) {
  return g ? g->groups.size() : 0;
}

size_t stk_splice_group_size(const stk_splice_groups* g, size_t group) {
  return g && group < g->groups.size() ? g->groups[group].size() : 0;
}

stk_status stk_splice_group_get(const stk_splice_groups* g, size_t group,
                                size_t index, double* start_s, double* end_s) {
  if (stk_status s = require(g && start_s && end_s, "null argument")) return s;
  if (stk_status s = require(
          group < g->groups.size() && index < g->groups[group].size(),
          "index out of range"))
    return s;
  *start_s = g->groups[group][index].start_s;
  *end_s = g->groups[group][index].end_s;
  return STK_OK;
}

stk_status stk_splice_groups_format(const stk_splice_groups* g, char** out) {
  if (stk_status s = require(g && out, "null argument")) return s;
  return guarded([&] { *out = dup_string(audio::format_splice_groups(g->groups)); });
}

void stk_splice_groups_free(stk_splice_groups* g) { delete g; }

/* ---------------- textnorm ---------------- */

stk_status stk_number_to_words(const char* numeral, char** out) {
  if (stk_status s = require(numeral && out, "null argument")) return s;
  return guarded([&] { *out = dup_string(textnorm::number_to_words(numeral)); });
}

stk_status stk_normalize_spoken(const char* text, char** out) {
  if (stk_status s = require(text && out, "null argument")) return s;
  return guarded([&] {
    *out = dup_string(join_tokens(textnorm::normalize_written_to_spoken(text)));
  });
}

int stk_is_spoken_form(const char* tokens) {
  if (!tokens) return 0;
  return textnorm::is_spoken_form(split_tokens(tokens)) ? 1 : 0;
}

/* ---------------- augment ---------------- */

stk_status stk_homophones_parse(const char* text, stk_homophones** out) {
  if (stk_status s = require(text && out, "null argument")) return s;
  return guarded([&] {
    *out = new stk_homophones{augment::HomophoneTable::parse(text)};
  });
}

stk_status stk_homophones_format(const stk_homophones* table, char** out) {
  if (stk_status s = require(table && out, "null argument")) return s;
  return guarded([&] { *out = dup_string(table->table.format()); });
}

void stk_homophones_free(stk_homophones* table) { delete table; }

namespace {

augment::CorruptionConfig make_config(const stk_corrupt_params* params,
                                      const char* vocab) {
  augment::CorruptionConfig config;
  config.homophone_rate = params->homophone_rate;
  config.sub_rate = params->sub_rate;
  config.del_rate = params->del_rate;
  config.ins_rate = params->ins_rate;
  config.seed = params->seed;
  config.vocab = split_tokens(vocab ? vocab : "");
  return config;
}

}  // namespace

stk_status stk_corrupt(const char* tokens, const stk_homophones* table,
                       const stk_corrupt_params* params, const char* vocab,
                       char** out) {
  if (stk_status s = require(tokens && table && params && out, "null argument"))
    return s;
  return guarded([&] {
    auto result = augment::corrupt(to_tokens(tokens), table->table,
                                   make_config(params, vocab));
    *out = dup_string(join_tokens(result));
  });
}

stk_status stk_augment_bitext(const char* bitext_tsv, const stk_homophones* table,
                              const stk_corrupt_params* params,
                              const char* vocab, char** out) {
  if (stk_status s =
          require(bitext_tsv && table && params && out, "null argument"))
    return s;
  return guarded([&] {
    auto pairs = augment::parse_bitext(bitext_tsv);
    auto result =
        augment::augment_bitext(pairs, table->table, make_config(params, vocab));
    *out = dup_string(augment::format_bitext(result));
  });
}

/* ---------------- segmenter ---------------- */

stk_status stk_boundary_train(const char* paragraphs, int window, int epochs,
                              double learning_rate, uint64_t seed,
                              stk_boundary_model** out) {
  if (stk_status s = require(paragraphs && out, "null argument")) return s;
  return guarded([&] {
    auto examples =
        segmenter::extract_training_examples(split_lines(paragraphs), window);
    *out = new stk_boundary_model{
        segmenter::train_boundary_model(examples, epochs, learning_rate, seed)};
  });
}

stk_status stk_boundary_model_format(const stk_boundary_model* model,
                                     char** out) {
  if (stk_status s = require(model && out, "null argument")) return s;
  return guarded([&] { *out = dup_string(model->model.format()); });
}

stk_status stk_boundary_model_parse(const char* text, stk_boundary_model** out) {
  if (stk_status s = require(text && out, "null argument")) return s;
  return guarded([&] {
    *out = new stk_boundary_model{segmenter::BoundaryModel::parse(text)};
  });
}

void stk_boundary_model_free(stk_boundary_model* model) { delete model; }

stk_status stk_segment(const stk_boundary_model* model, const char* tokens,
                       int min_len, int max_len, char** out_lines) {
  if (stk_status s = require(model && tokens && out_lines, "null argument"))
    return s;
  return guarded([&] {
    auto segmented =
        segmenter::segment(to_tokens(tokens), model->model, min_len, max_len);
    *out_lines = dup_string(metrics::format_segments(segmented));
  });
}

/* ---------------- corpusops ---------------- */

stk_status stk_bitext_filter_length(const char* bitext_tsv, int max_words,
                                    char** out) {
  if (stk_status s = require(bitext_tsv && out, "null argument")) return s;
  return guarded([&] {
    auto pairs = augment::parse_bitext(bitext_tsv);
    *out = dup_string(
        augment::format_bitext(corpusops::filter_length(pairs, max_words)));
  });
}

stk_status stk_bitext_dedup(const char* bitext_tsv, char** out) {
  if (stk_status s = require(bitext_tsv && out, "null argument")) return s;
  return guarded([&] {
    auto pairs = augment::parse_bitext(bitext_tsv);
    *out = dup_string(augment::format_bitext(corpusops::dedup(pairs)));
  });
}

stk_status stk_lexicon_train(const char* bitext_tsv, int iterations, int reverse,
                             stk_lexicon** out) {
  if (stk_status s = require(bitext_tsv && out, "null argument")) return s;
  return guarded([&] {
    auto pairs = augment::parse_bitext(bitext_tsv);
    if (reverse)
      for (auto& p : pairs) std::swap(p.source, p.target);
    *out = new stk_lexicon{corpusops::LexiconModel::train(pairs, iterations)};
  });
}

stk_status stk_lexicon_format(const stk_lexicon* lexicon, char** out) {
  if (stk_status s = require(lexicon && out, "null argument")) return s;
  return guarded([&] { *out = dup_string(lexicon->model.format()); });
}

stk_status stk_lexicon_parse(const char* text, stk_lexicon** out) {
  if (stk_status s = require(text && out, "null argument")) return s;
  return guarded([&] {
    *out = new stk_lexicon{corpusops::LexiconModel::parse(text)};
  });
}

void stk_lexicon_free(stk_lexicon* lexicon) { delete lexicon; }

stk_status stk_similarity(const char* source_tokens, const char* target_tokens,
                          const stk_lexicon* forward, const stk_lexicon* reverse,
                          double* out) {
  if (stk_status s =
          require(source_tokens && target_tokens && forward && out,
                  "null argument"))
    return s;
  return guarded([&] {
    augment::SentencePair pair{source_tokens, target_tokens, ""};
    *out = corpusops::similarity(pair, forward->model,
                                 reverse ? &reverse->model : nullptr);
  });
}

stk_status stk_bitext_filter_similarity(const char* bitext_tsv,
                                        const stk_lexicon* forward,
                                        const stk_lexicon* reverse,
                                        double threshold, char** out) {
  if (stk_status s = require(bitext_tsv && forward && out, "null argument"))
    return s;
  return guarded([&] {
    auto pairs = augment::parse_bitext(bitext_tsv);
    auto kept = corpusops::filter_similarity(
        pairs, forward->model, reverse ? &reverse->model : nullptr, threshold);
    *out = dup_string(augment::format_bitext(kept));
  });
}

stk_status stk_filter_outlier_scores(const char* score_lines, double z_threshold,
                                     char** out_id_lines) {
  if (stk_status s = require(score_lines && out_id_lines, "null argument"))
    return s;
  return guarded([&] {
    auto items = corpusops::parse_scores(score_lines);
    auto kept = corpusops::filter_outlier_scores(items, z_threshold);
    std::string text;
    for (const auto& id : kept) {
      text += id;
      text += '\n';
    }
    *out_id_lines = dup_string(text);
  });
}

/* ---------------- metrics ---------------- */

stk_status stk_edit_distance(const char* a, const char* b, int64_t* distance,
                             int64_t* substitutions, int64_t* deletions,
                             int64_t* insertions) {
  if (stk_status s = require(a && b && distance, "null argument")) return s;
  return guarded([&] {
    metrics::EditCounts counts = metrics::edit_distance(to_tokens(a), to_tokens(b));
    *distance = counts.distance;
    if (substitutions) *substitutions = counts.substitutions;
    if (deletions) *deletions = counts.deletions;
    if (insertions) *insertions = counts.insertions;
  });
}

stk_status stk_wer(const char* ref_tokens, const char* hyp_tokens, double* out) {
  if (stk_status s = require(ref_tokens && hyp_tokens && out, "null argument"))
    return s;
  return guarded([&] {
    *out = metrics::wer(to_tokens(ref_tokens), to_tokens(hyp_tokens));
  });
}

namespace {

void fill_report(const metrics::ScoreReport& in, stk_score_report* out) {
  out->bleu = in.bleu;
  out->wer = in.wer;
  for (int n = 0; n < 4; ++n) out->precisions[n] = in.precisions[n];
  out->brevity_penalty = in.brevity_penalty;
  out->segments = in.segments;
}

}  // namespace

stk_status stk_bleu(const char* ref_lines, const char* hyp_lines,
                    int case_sensitive, stk_score_report* out) {
  if (stk_status s = require(ref_lines && hyp_lines && out, "null argument"))
    return s;
  return guarded([&] {
    metrics::ScoreReport report =
        metrics::bleu_corpus(to_segments(ref_lines).segments,
                             to_segments(hyp_lines).segments, 4,
                             case_sensitive != 0);
    fill_report(report, out);
  });
}

stk_status stk_mwer_resegment(const char* hyp_tokens, const char* ref_lines,
                              char** out_lines) {
  if (stk_status s = require(hyp_tokens && ref_lines && out_lines,
                             "null argument"))
    return s;
  return guarded([&] {
    auto realigned =
        metrics::mwer_resegment(to_tokens(hyp_tokens), to_segments(ref_lines));
    *out_lines = dup_string(metrics::format_segments(realigned));
  });
}

stk_status stk_score_speech_translation(const char* hyp_text,
                                        const char* ref_lines,
                                        int case_sensitive,
                                        stk_score_report* report,
                                        char** out_segments) {
  if (stk_status s = require(hyp_text && ref_lines && report, "null argument"))
    return s;
  return guarded([&] {
    metrics::SegmentedText refs = to_segments(ref_lines);
    metrics::Tokens stream = to_tokens(hyp_text);  // flattens any segmentation
    metrics::ScoreReport result =
        metrics::score_speech_translation(stream, refs, case_sensitive != 0);
    fill_report(result, report);
    if (out_segments) {
      auto realigned = metrics::mwer_resegment(stream, refs);
      *out_segments = dup_string(metrics::format_segments(realigned));
    }
  });
}

stk_status stk_ctm_to_segments(const char* ctm_text, char** out_lines) {
  if (stk_status s = require(ctm_text && out_lines, "null argument")) return s;
  return guarded([&] {
    *out_lines = dup_string(metrics::format_segments(metrics::parse_ctm(ctm_text)));
  });
}

stk_status stk_score_report_format(const stk_score_report* report, char** out) {
  if (stk_status s = require(report && out, "null argument")) return s;
  return guarded([&] {
    metrics::ScoreReport r;
    r.bleu = report->bleu;
    r.wer = report->wer;
    for (int n = 0; n < 4; ++n) r.precisions[n] = report->precisions[n];
    r.brevity_penalty = report->brevity_penalty;
    r.segments = report->segments;
    *out = dup_string(r.format());
  });
}

/* ---------------- fusion ---------------- */

stk_status stk_nbest_parse(const char* text, stk_nbest** out) {
  if (stk_status s = require(text && out, "null argument")) return s;
  return guarded([&] { *out = new stk_nbest{fusion::parse_nbest(text)}; });
}

stk_status stk_nbest_format(const stk_nbest* set, char** out) {
  if (stk_status s = require(set && out, "null argument")) return s;
  return guarded([&] { *out = dup_string(fusion::format_nbest(set->set)); });
}

void stk_nbest_free(stk_nbest* set) { delete set; }

stk_status stk_nbest_merge(const stk_nbest* const* sets, size_t count,
                           stk_merge_policy policy, stk_nbest** out) {
  if (stk_status s = require(sets && count > 0 && out, "null argument")) return s;
  for (size_t i = 0; i < count; ++i)
    if (stk_status s = require(sets[i] != nullptr, "null set in array")) return s;
  return guarded([&] {
    std::vector<fusion::NBestSet> input;
    input.reserve(count);
    for (size_t i = 0; i < count; ++i) input.push_back(sets[i]->set);
    auto merged = fusion::merge_nbest_sets(
        input, policy == STK_MERGE_DROP ? fusion::MissingScorePolicy::kDrop
                                        : fusion::MissingScorePolicy::kImputeWorst);
    *out = new stk_nbest{std::move(merged)};
  });
}

stk_status stk_weights_parse(const char* text, stk_weights** out) {
  if (stk_status s = require(text && out, "null argument")) return s;
  return guarded([&] {
    *out = new stk_weights{fusion::WeightVector::parse(text)};
  });
}

stk_status stk_weights_format(const stk_weights* weights, char** out) {
  if (stk_status s = require(weights && out, "null argument")) return s;
  return guarded([&] { *out = dup_string(weights->weights.format()); });
}

void stk_weights_free(stk_weights* weights) { delete weights; }

double stk_length_penalty(size_t length, double alpha) {
  return fusion::length_penalty(length, alpha);
}

stk_status stk_nbest_rescore(const stk_nbest* set, const stk_weights* weights,
                             stk_nbest** out) {
  if (stk_status s = require(set && weights && out, "null argument")) return s;
  return guarded([&] {
    *out = new stk_nbest{fusion::rescore_set(set->set, weights->weights)};
  });
}

stk_status stk_nbest_top1(const stk_nbest* set, char** out_lines) {
  if (stk_status s = require(set && out_lines, "null argument")) return s;
  return guarded([&] {
    std::string text;
    for (const auto& tokens : fusion::top1_tokens(set->set)) {
      text += join_tokens(tokens);
      text += '\n';
    }
    *out_lines = dup_string(text);
  });
}

namespace {

fusion::Grid parse_grid_spec(const std::string& spec) {
  fusion::Grid grid;
  size_t start = 0;
  while (start < spec.size()) {
    size_t semi = spec.find(';', start);
    if (semi == std::string::npos) semi = spec.size();
    std::string entry = spec.substr(start, semi - start);
    if (!entry.empty()) {
      size_t eq = entry.find('=');
      if (eq == std::string::npos || eq == 0)
        throw Error(ErrorCode::InvalidArgument,
                    "grid entry needs 'model=v1,v2,...': '" + entry + "'");
      std::vector<double> values;
      size_t vstart = eq + 1;
      while (vstart <= entry.size()) {
        size_t comma = entry.find(',', vstart);
        if (comma == std::string::npos) comma = entry.size();
        double v;
        if (!parse_double(entry.substr(vstart, comma - vstart), &v))
          throw Error(ErrorCode::InvalidArgument,
                      "bad grid value in '" + entry + "'");
        values.push_back(v);
        vstart = comma + 1;
      }
      grid[entry.substr(0, eq)] = values;
    }
    start = semi + 1;
  }
  return grid;
}

std::vector<double> parse_value_list(const std::string& list) {
  std::vector<double> values;
  size_t start = 0;
  while (start <= list.size()) {
    size_t comma = list.find(',', start);
    if (comma == std::string::npos) comma = list.size();
    std::string item = list.substr(start, comma - start);
    if (!item.empty()) {
      double v;
      if (!parse_double(item, &v))
        throw Error(ErrorCode::InvalidArgument, "bad value '" + item + "'");
      values.push_back(v);
    }
    start = comma + 1;
  }
  return values;
}

}  // namespace

stk_status stk_tune_grid(const stk_nbest* dev, const char* ref_lines,
                         const char* grid_spec, const char* alpha_list,
                         stk_weights** out) {
  if (stk_status s = require(dev && ref_lines && grid_spec && alpha_list && out,
                             "null argument"))
    return s;
  return guarded([&] {
    fusion::Grid grid = parse_grid_spec(grid_spec);
    std::vector<double> alphas = parse_value_list(alpha_list);
    auto best =
        fusion::tune_weights_grid(dev->set, to_segments(ref_lines), grid, alphas);
    *out = new stk_weights{std::move(best)};
  });
}

}  // extern "C"
