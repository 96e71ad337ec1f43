#ifndef STKIT_SEGMENTER_HPP
#define STKIT_SEGMENTER_HPP

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "metrics.hpp"
#include "textnorm.hpp"

namespace stkit::segmenter {

// Candidate sentence boundary: token-window features around an inter-token
// position, labeled from sentence-final punctuation in the written source.
struct BoundaryExample {
  std::vector<std::string> features;
  bool boundary = false;
};

// Logistic scorer over token-window features.
class BoundaryModel {
 public:
  BoundaryModel() = default;
  BoundaryModel(int window, double bias,
                std::unordered_map<std::string, double> weights)
      : window_(window), bias_(bias), weights_(std::move(weights)) {}

  // Probability in (0, 1) that the position is a sentence boundary.
  double predict(const std::vector<std::string>& features) const;

  int window() const { return window_; }
  double bias() const { return bias_; }
  const std::unordered_map<std::string, double>& weights() const {
    return weights_;
  }

  // Text form: "window<TAB>w", "bias<TAB>v", then "feature<TAB>weight" lines.
  std::string format() const;
  static BoundaryModel parse(const std::string& text);

 private:
  int window_ = 1;
  double bias_ = 0.0;
  std::unordered_map<std::string, double> weights_;
};

// Features for the boundary between stream[pos-1] and stream[pos]: the
// window tokens on each side keyed by signed offset, "<pad>" off the ends.
std::vector<std::string> window_features(
    const std::vector<std::string>& stream, size_t pos, int window);

// One example per inter-token position of each paragraph. The label comes
// from the written token's trailing punctuation (any of ".!?"); the features
// come from the normalized spoken stream, so training matches ASR input.
std::vector<BoundaryExample> extract_training_examples(
    const std::vector<std::string>& paragraphs, int window);

// Seeded SGD on log-loss with a fixed shuffle. The learning rate is halved
// and an epoch retried whenever the averaged loss would rise, so the
// recorded per-epoch losses never increase. Throws DegenerateLabels.
BoundaryModel train_boundary_model(const std::vector<BoundaryExample>& examples,
                                   int epochs, double learning_rate,
                                   uint64_t seed,
                                   std::vector<double>* epoch_losses = nullptr);

// Exact DP over cut positions maximizing the summed boundary/non-boundary
// log-probabilities, segment lengths within [min_len, max_len]. The final
// segment may fall below min_len only when no segmentation satisfies it.
// Ties prefer fewer segments, then leftmost cuts. Throws Infeasible when
// min_len > max_len.
metrics::SegmentedText segment(const textnorm::SpokenText& tokens,
                               const BoundaryModel& model, int min_len,
                               int max_len);

}  // namespace stkit::segmenter

#endif  // STKIT_SEGMENTER_HPP
