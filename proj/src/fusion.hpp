#ifndef STKIT_FUSION_HPP
#define STKIT_FUSION_HPP

#include <map>
#include <string>
#include <vector>

#include "metrics.hpp"

namespace stkit::fusion {

struct Hypothesis {
  std::vector<std::string> tokens;
  std::map<std::string, double> scores;  // model name -> log score
};

// Hypotheses for one sentence; token sequences are unique after merge.
struct NBestList {
  std::string sentence_id;
  std::vector<Hypothesis> hypotheses;
};

// All sentences of one n-best file, in first-appearance order.
struct NBestSet {
  std::vector<NBestList> lists;
};

// Lines "sent_id ||| tokens ||| name=value name=value ...". Duplicate
// (id, tokens) lines merge their score maps, later values winning.
// Throws MalformedLine.
NBestSet parse_nbest(const std::string& text);
std::string format_nbest(const NBestSet& set);

enum class MissingScorePolicy {
  kImputeWorst,  // missing model score := that model's minimum in the list
  kDrop,         // hypotheses missing any model's score are removed
};

// Union of several lists for the same sentence, keyed by token sequence in
// first-appearance order. Throws IdMismatch.
NBestList merge_nbest(const std::vector<NBestList>& lists,
                      MissingScorePolicy policy);

// Set-level merge: sentences matched by id across sets.
NBestSet merge_nbest_sets(const std::vector<NBestSet>& sets,
                          MissingScorePolicy policy);

// ((5 + length) / 6)^alpha. length >= 1.
double length_penalty(size_t length, double alpha);

struct WeightVector {
  std::map<std::string, double> model_weights;
  double alpha = 0.0;

  // Lines "model<TAB>weight" plus "alpha<TAB>value" ("alpha" is reserved).
  std::string format() const;
  static WeightVector parse(const std::string& text);
};

// combined(h) = sum_m w_m * score_m(h) / length_penalty(|h|, alpha), sorted
// descending with ties keeping the input order. Throws MissingScore when a
// hypothesis lacks a weighted model's score.
NBestList rescore(const NBestList& list, const WeightVector& weights);
NBestSet rescore_set(const NBestSet& set, const WeightVector& weights);

// Top-scoring hypothesis per sentence, one line each.
std::vector<std::vector<std::string>> top1_tokens(const NBestSet& set);

// Per-model candidate weight values for the tuner.
using Grid = std::map<std::string, std::vector<double>>;

// Exhaustive search maximizing corpus BLEU of the top-1 outputs. Grid points
// enumerate with models in name order, alpha varying fastest; the first
// point reaching the best BLEU wins. The all-zero combination is not a valid
// weight vector and is skipped. Throws GridEmpty / RefMismatch.
WeightVector tune_weights_grid(const NBestSet& dev,
                               const metrics::SegmentedText& refs,
                               const Grid& grid,
                               const std::vector<double>& alphas);

}  // namespace stkit::fusion

#endif  // STKIT_FUSION_HPP
