#ifndef STKIT_CORPUSOPS_HPP
#define STKIT_CORPUSOPS_HPP

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "augment.hpp"

namespace stkit::corpusops {

using augment::SentencePair;

// Keeps pairs where both sides have at most max_words tokens.
std::vector<SentencePair> filter_length(const std::vector<SentencePair>& pairs,
                                        int max_words = 100);

// Keeps the first occurrence of each exact (source, target) pair.
std::vector<SentencePair> dedup(const std::vector<SentencePair>& pairs);

// Word-translation table t(target | source) trained with EM over the bitext,
// with a null source word so every target word has some explanation.
class LexiconModel {
 public:
  // Throws EmptyCorpus. iterations >= 1. Corpus log-likelihood is
  // non-decreasing per iteration; the history is kept for inspection.
  static LexiconModel train(const std::vector<SentencePair>& pairs,
                            int iterations);

  // Probability t(target_word | source_word). The null word is "<NULL>".
  double prob(const std::string& target_word,
              const std::string& source_word) const;

  // Best explanation of target_word by any source-side word (or null),
  // floored at the smoothing epsilon.
  double max_over_source(const std::string& target_word,
                         const std::vector<std::string>& source_tokens) const;

  const std::vector<double>& log_likelihoods() const { return log_likelihoods_; }

  // Lines "target<TAB>source<TAB>prob", sorted; "<NULL>" names the null word.
  std::string format() const;
  static LexiconModel parse(const std::string& text);

  static constexpr double kEpsilon = 1e-6;
  static constexpr const char* kNullWord = "<NULL>";

 private:
  // t_[source][target] = probability; kNullWord keys the null source word.
  std::map<std::string, std::map<std::string, double>> t_;
  std::vector<double> log_likelihoods_;
};

// Mean best-translation probability of the target side given the source
// (plus null), geometrically combined with the reverse direction when a
// reverse model is supplied. Result lies in [0, 1]. Throws EmptySide.
double similarity(const SentencePair& pair, const LexiconModel& forward,
                  const LexiconModel* reverse = nullptr);

// Keeps pairs whose similarity is >= threshold.
std::vector<SentencePair> filter_similarity(
    const std::vector<SentencePair>& pairs, const LexiconModel& forward,
    const LexiconModel* reverse, double threshold);

struct ScoredItem {
  std::string id;
  double score = 0.0;
};

// Keeps items with |score - mean| <= z_threshold * population stddev; the
// boundary itself is kept. Throws TooFew for fewer than two items.
std::vector<std::string> filter_outlier_scores(
    const std::vector<ScoredItem>& items, double z_threshold);

// Score list file: lines "id<TAB>score".
std::vector<ScoredItem> parse_scores(const std::string& text);

}  // namespace stkit::corpusops

#endif  // STKIT_CORPUSOPS_HPP
