#ifndef STKIT_METRICS_HPP
#define STKIT_METRICS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace stkit::metrics {

using Tokens = std::vector<std::string>;

// Ordered sentence segments; individual segments may be empty. Concatenating
// them defines the token stream.
struct SegmentedText {
  std::vector<Tokens> segments;

  Tokens flatten() const;
};

struct EditCounts {
  long long distance = 0;
  long long substitutions = 0;
  long long deletions = 0;   // tokens of a absent from b
  long long insertions = 0;  // tokens of b absent from a
};

// Levenshtein with unit costs, counts from one optimal backtrace. Backtrace
// ties prefer substitution, then deletion, then insertion.
EditCounts edit_distance(const Tokens& a, const Tokens& b);

// edit_distance(ref, hyp) / len(ref). Throws EmptyReference.
double wer(const Tokens& ref, const Tokens& hyp);

struct ScoreReport {
  double bleu = 0.0;           // [0, 100]
  double wer = 0.0;            // corpus WER against the (realigned) segments
  double precisions[4] = {0, 0, 0, 0};
  double brevity_penalty = 1.0;
  size_t segments = 0;
  std::vector<size_t> boundaries;  // realigned cut positions (resegment only)

  std::string format() const;  // key = value block
};

// Corpus BLEU: modified n-gram precision with clipping, geometric mean over
// n = 1..4, brevity penalty exp(1 - r/c) when c < r. Single reference, no
// smoothing: any zero n-gram precision gives 0. Throws LengthMismatch.
ScoreReport bleu_corpus(const std::vector<Tokens>& refs,
                        const std::vector<Tokens>& hyps, int max_n = 4,
                        bool case_sensitive = true);

// Partitions the hypothesis stream into exactly as many contiguous (possibly
// empty) segments as the reference, minimizing the summed per-segment edit
// distance. Ties resolve to the earliest cut positions.
SegmentedText mwer_resegment(const Tokens& hyp_stream,
                             const SegmentedText& ref_segments);

// bleu_corpus over the mWER realignment of the hypothesis stream. Only the
// flattened stream matters, however the caller pre-segmented it.
ScoreReport score_speech_translation(const Tokens& hyp_stream,
                                     const SegmentedText& ref_segments,
                                     bool case_sensitive = true);

// One segment per line.
SegmentedText parse_segments(const std::string& text);
std::string format_segments(const SegmentedText& segmented);

// CTM lines "utt channel start dur word [conf]" grouped into one segment per
// utterance (first-appearance order), words ordered by start time.
SegmentedText parse_ctm(const std::string& text);

}  // namespace stkit::metrics

#endif  // STKIT_METRICS_HPP
