/* stkit: speech-translation pipeline toolkit.
 *
 * C interface to the toolkit: audio perturbation and segmentation, spoken-
 * form text normalization, ASR-error simulation, bitext filtering, sentence
 * re-segmentation, n-best fusion/rescoring, and WER/BLEU evaluation with
 * WER-minimizing realignment.
 *
 * Conventions:
 *   - Functions return STK_OK or an error code; stk_last_error() describes
 *     the most recent failure on the calling thread.
 *   - Token sequences travel as whitespace-separated UTF-8 strings; multi-
 *     record payloads are newline-separated lines in the formats documented
 *     per function.
 *   - Strings returned through char** are owned by the caller and released
 *     with stk_string_free(); buffers with stk_buffer_free(); handles with
 *     their stk_*_free() function. Out-parameters are untouched on error.
 */

#ifndef STKIT_STKIT_H
#define STKIT_STKIT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(STKIT_BUILD)
#define STK_API __declspec(dllexport)
#else
#define STK_API __declspec(dllimport)
#endif
#else
#define STK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum stk_status {
  STK_OK = 0,
  STK_ERR_NOT_RIFF,
  STK_ERR_UNSUPPORTED_FORMAT,
  STK_ERR_TRUNCATED,
  STK_ERR_BAD_FACTOR,
  STK_ERR_SILENT_SIGNAL,
  STK_ERR_BAD_FRAME,
  STK_ERR_NOT_A_NUMBER,
  STK_ERR_TOO_LARGE,
  STK_ERR_DEGENERATE_LABELS,
  STK_ERR_INFEASIBLE,
  STK_ERR_EMPTY_CORPUS,
  STK_ERR_EMPTY_SIDE,
  STK_ERR_TOO_FEW,
  STK_ERR_EMPTY_REFERENCE,
  STK_ERR_LENGTH_MISMATCH,
  STK_ERR_MALFORMED_LINE,
  STK_ERR_ID_MISMATCH,
  STK_ERR_MISSING_SCORE,
  STK_ERR_GRID_EMPTY,
  STK_ERR_REF_MISMATCH,
  STK_ERR_INVALID_ARGUMENT,
  STK_ERR_INTERNAL
} stk_status;

STK_API const char* stk_status_name(stk_status status);

/* Message for the last failing call on this thread; empty until a failure. */
STK_API const char* stk_last_error(void);

STK_API const char* stk_version(void);

STK_API void stk_string_free(char* s);
STK_API void stk_buffer_free(void* p);

/* Deterministic per-stage seed derivation from one top-level seed. */
STK_API uint64_t stk_derive_seed(uint64_t seed, const char* label);

/* ---------------- audio ---------------- */

typedef struct stk_audio stk_audio;
typedef struct stk_fragments stk_fragments;
typedef struct stk_splice_groups stk_splice_groups;

/* RIFF/WAVE, PCM 16-bit mono. Samples scale to [-1, 1] by 1/32768. */
STK_API stk_status stk_wav_parse(const void* bytes, size_t len, stk_audio** out);

/* 16-bit mono WAV image; samples clamp to [-1, 1] before quantization. */
STK_API stk_status stk_wav_render(const stk_audio* audio, void** bytes_out,
                                  size_t* len_out);

STK_API stk_status stk_audio_create(const float* samples, size_t count,
                                    int sample_rate_hz, stk_audio** out);
STK_API size_t stk_audio_num_samples(const stk_audio* audio);
STK_API int stk_audio_sample_rate(const stk_audio* audio);
STK_API double stk_audio_duration_s(const stk_audio* audio);
/* Pointer into the handle; valid until the handle is freed. */
STK_API const float* stk_audio_samples(const stk_audio* audio);
STK_API void stk_audio_free(stk_audio* audio);

/* Output length = round(len / factor); linear interpolation; rate kept. */
STK_API stk_status stk_audio_speed_perturb(const stk_audio* audio, double factor,
                                           stk_audio** out);

/* White Gaussian noise at snr_db, deterministic per seed. */
STK_API stk_status stk_audio_add_noise(const stk_audio* audio, double snr_db,
                                       uint64_t seed, stk_audio** out);

/* Mean-square energy gate over frames; speech runs separated by fewer than
 * min_gap_frames silent frames merge. */
STK_API stk_status stk_audio_energy_vad(const stk_audio* audio, double frame_ms,
                                        double energy_threshold,
                                        int min_gap_frames,
                                        stk_fragments** out);

STK_API size_t stk_fragments_count(const stk_fragments* fragments);
STK_API stk_status stk_fragments_get(const stk_fragments* fragments, size_t index,
                                     double* start_s, double* end_s);
/* Text form: "start<TAB>end" per line, 3 decimals. */
STK_API stk_status stk_fragments_format(const stk_fragments* fragments,
                                        char** out);
STK_API stk_status stk_fragments_parse(const char* text, stk_fragments** out);
STK_API void stk_fragments_free(stk_fragments* fragments);

/* Greedy grouping of consecutive fragments to a minimum summed duration;
 * only the final group may fall short. */
STK_API stk_status stk_fragments_splice(const stk_fragments* fragments,
                                        double min_s, stk_splice_groups** out);
STK_API size_t stk_splice_groups_count(const stk_splice_groups* groups);
STK_API size_t stk_splice_group_size(const stk_splice_groups* groups,
                                     size_t group);
STK_API stk_status stk_splice_group_get(const stk_splice_groups* groups,
                                        size_t group, size_t index,
                                        double* start_s, double* end_s);
/* Text form: "group_index<TAB>start<TAB>end" per fragment. */
STK_API stk_status stk_splice_groups_format(const stk_splice_groups* groups,
                                            char** out);
STK_API void stk_splice_groups_free(stk_splice_groups* groups);

/* ---------------- textnorm ---------------- */

/* American English cardinal words for a digit string with an optional
 * decimal point ("42" -> "forty two", "2.5" -> "two point five"). */
STK_API stk_status stk_number_to_words(const char* numeral, char** out);

/* Written text to spoken form: lowercase, punctuation stripped (intra-word
 * apostrophes kept), numerals expanded to words. Never fails on content. */
STK_API stk_status stk_normalize_spoken(const char* text, char** out);

/* 1 when the whitespace-separated tokens satisfy the spoken-form
 * invariants, else 0. */
STK_API int stk_is_spoken_form(const char* tokens);

/* ---------------- augment ---------------- */

typedef struct stk_homophones stk_homophones;

typedef struct stk_corrupt_params {
  double homophone_rate;
  double sub_rate;
  double del_rate;
  double ins_rate;
  uint64_t seed;
} stk_corrupt_params;

/* Lines "word<TAB>alt1 alt2 ...". */
STK_API stk_status stk_homophones_parse(const char* text, stk_homophones** out);
STK_API stk_status stk_homophones_format(const stk_homophones* table, char** out);
STK_API void stk_homophones_free(stk_homophones* table);

/* Simulated ASR errors on spoken-form tokens. vocab (space-separated) backs
 * substitutions and insertions; it may be NULL when those rates are zero. */
STK_API stk_status stk_corrupt(const char* tokens, const stk_homophones* table,
                               const stk_corrupt_params* params,
                               const char* vocab, char** out);

/* Bitext TSV "source<TAB>target": source := corrupt(normalize(source)),
 * target untouched; pair i draws from a seed derived from (seed, i). */
STK_API stk_status stk_augment_bitext(const char* bitext_tsv,
                                      const stk_homophones* table,
                                      const stk_corrupt_params* params,
                                      const char* vocab, char** out);

/* ---------------- segmenter ---------------- */

typedef struct stk_boundary_model stk_boundary_model;

/* Trains the logistic boundary scorer on punctuated paragraphs (one per
 * line); labels come from sentence-final ".!?". */
STK_API stk_status stk_boundary_train(const char* paragraphs, int window,
                                      int epochs, double learning_rate,
                                      uint64_t seed, stk_boundary_model** out);
STK_API stk_status stk_boundary_model_format(const stk_boundary_model* model,
                                             char** out);
STK_API stk_status stk_boundary_model_parse(const char* text,
                                            stk_boundary_model** out);
STK_API void stk_boundary_model_free(stk_boundary_model* model);

/* Optimal re-segmentation of a spoken token stream; one sentence per output
 * line. Segment lengths lie in [min_len, max_len]; the final segment may be
 * shorter when nothing else is feasible. */
STK_API stk_status stk_segment(const stk_boundary_model* model,
                               const char* tokens, int min_len, int max_len,
                               char** out_lines);

/* ---------------- corpusops ---------------- */

typedef struct stk_lexicon stk_lexicon;

/* Bitext filters; input and output are TSV lines "source<TAB>target". */
STK_API stk_status stk_bitext_filter_length(const char* bitext_tsv,
                                            int max_words, char** out);
STK_API stk_status stk_bitext_dedup(const char* bitext_tsv, char** out);

/* EM-trained word-translation lexicon t(target | source) with a null source
 * word. reverse != 0 swaps the sides before training. */
STK_API stk_status stk_lexicon_train(const char* bitext_tsv, int iterations,
                                     int reverse, stk_lexicon** out);
/* Lines "target<TAB>source<TAB>prob"; "<NULL>" names the null word. */
STK_API stk_status stk_lexicon_format(const stk_lexicon* lexicon, char** out);
STK_API stk_status stk_lexicon_parse(const char* text, stk_lexicon** out);
STK_API void stk_lexicon_free(stk_lexicon* lexicon);

/* Cross-lingual similarity in [0, 1]; reverse may be NULL. */
STK_API stk_status stk_similarity(const char* source_tokens,
                                  const char* target_tokens,
                                  const stk_lexicon* forward,
                                  const stk_lexicon* reverse, double* out);

STK_API stk_status stk_bitext_filter_similarity(const char* bitext_tsv,
                                                const stk_lexicon* forward,
                                                const stk_lexicon* reverse,
                                                double threshold, char** out);

/* Score lines "id<TAB>score"; keeps ids with |score - mean| within
 * z_threshold population standard deviations (boundary kept). */
STK_API stk_status stk_filter_outlier_scores(const char* score_lines,
                                             double z_threshold,
                                             char** out_id_lines);

/* ---------------- metrics ---------------- */

typedef struct stk_score_report {
  double bleu;            /* [0, 100] */
  double wer;             /* corpus WER against the scored segments */
  double precisions[4];   /* modified n-gram precisions p1..p4 */
  double brevity_penalty;
  uint64_t segments;
} stk_score_report;

STK_API stk_status stk_edit_distance(const char* a, const char* b,
                                     int64_t* distance, int64_t* substitutions,
                                     int64_t* deletions, int64_t* insertions);

STK_API stk_status stk_wer(const char* ref_tokens, const char* hyp_tokens,
                           double* out);

/* Corpus BLEU of line-aligned segments, single reference, no smoothing. */
STK_API stk_status stk_bleu(const char* ref_lines, const char* hyp_lines,
                            int case_sensitive, stk_score_report* out);

/* Splits the hypothesis stream into one segment per reference line so the
 * summed edit distance is minimal; earliest cuts on ties. */
STK_API stk_status stk_mwer_resegment(const char* hyp_tokens,
                                      const char* ref_lines, char** out_lines);

/* BLEU over the mWER realignment; only the flattened hypothesis matters.
 * out_segments (optional) receives the realigned segments, one per line. */
STK_API stk_status stk_score_speech_translation(const char* hyp_text,
                                                const char* ref_lines,
                                                int case_sensitive,
                                                stk_score_report* report,
                                                char** out_segments);

/* CTM lines "utt channel start dur word [conf]" to one segment per
 * utterance, first-appearance order, words ordered by start time. */
STK_API stk_status stk_ctm_to_segments(const char* ctm_text, char** out_lines);

/* Key-value block ("bleu = ...", "p1 = ...", ...) for a report. */
STK_API stk_status stk_score_report_format(const stk_score_report* report,
                                           char** out);

/* ---------------- fusion ---------------- */

typedef struct stk_nbest stk_nbest;
typedef struct stk_weights stk_weights;

typedef enum stk_merge_policy {
  STK_MERGE_IMPUTE_WORST = 0,
  STK_MERGE_DROP = 1
} stk_merge_policy;

/* Lines "sent_id ||| tokens ||| name=value ...". */
STK_API stk_status stk_nbest_parse(const char* text, stk_nbest** out);
STK_API stk_status stk_nbest_format(const stk_nbest* set, char** out);
STK_API void stk_nbest_free(stk_nbest* set);

/* Merges hypotheses across sets per sentence id. */
STK_API stk_status stk_nbest_merge(const stk_nbest* const* sets, size_t count,
                                   stk_merge_policy policy, stk_nbest** out);

/* Weights file: "model<TAB>weight" lines plus "alpha<TAB>value". */
STK_API stk_status stk_weights_parse(const char* text, stk_weights** out);
STK_API stk_status stk_weights_format(const stk_weights* weights, char** out);
STK_API void stk_weights_free(stk_weights* weights);

STK_API double stk_length_penalty(size_t length, double alpha);

/* Sorts every sentence's hypotheses by the weighted combined score divided
 * by the length penalty, descending, stable. */
STK_API stk_status stk_nbest_rescore(const stk_nbest* set,
                                     const stk_weights* weights,
                                     stk_nbest** out);

/* Top hypothesis tokens per sentence, one line each. */
STK_API stk_status stk_nbest_top1(const stk_nbest* set, char** out_lines);

/* Exhaustive tuning for corpus BLEU of top-1 outputs against line-aligned
 * references. grid_spec: "model=v1,v2;model2=v1,..."; alpha_list: "a1,a2". */
STK_API stk_status stk_tune_grid(const stk_nbest* dev, const char* ref_lines,
                                 const char* grid_spec, const char* alpha_list,
                                 stk_weights** out);

#ifdef __cplusplus
}
#endif

#endif /* STKIT_STKIT_H */
