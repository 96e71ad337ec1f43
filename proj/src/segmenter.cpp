#include "segmenter.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "error.hpp"
#include "rng.hpp"
#include "textutil.hpp"

namespace stkit::segmenter {

namespace {

constexpr const char* kPad = "<pad>";

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

double clamp_prob(double p) {
  return std::clamp(p, 1e-12, 1.0 - 1e-12);
}

// Written token ends a sentence when its trailing punctuation (ignoring
// closing quotes/brackets) contains '.', '!' or '?'.
bool ends_sentence(const std::string& written_token) {
  size_t i = written_token.size();
  while (i > 0) {
    char c = written_token[i - 1];
    if (c == '"' || c == '\'' || c == ')' || c == ']' || c == '}') {
      --i;
      continue;
    }
    return c == '.' || c == '!' || c == '?';
  }
  return false;
}

}  // namespace

std::vector<std::string> window_features(
    const std::vector<std::string>& stream, size_t pos, int window) {
  std::vector<std::string> features;
  features.reserve(2 * static_cast<size_t>(window));
  for (int k = window; k >= 1; --k) {
    const char* tok =
        pos >= static_cast<size_t>(k) ? stream[pos - k].c_str() : kPad;
    features.push_back("-" + std::to_string(k) + ":" + tok);
  }
  for (int k = 1; k <= window; ++k) {
    size_t idx = pos + static_cast<size_t>(k) - 1;
    const char* tok = idx < stream.size() ? stream[idx].c_str() : kPad;
    features.push_back("+" + std::to_string(k) + ":" + tok);
  }
  return features;
}

std::vector<BoundaryExample> extract_training_examples(
    const std::vector<std::string>& paragraphs, int window) {
  if (window < 1)
    throw Error(ErrorCode::InvalidArgument, "window must be >= 1");

  std::vector<BoundaryExample> out;
  for (const auto& paragraph : paragraphs) {
    std::vector<std::string> written = split_tokens(paragraph);
    if (written.size() < 2) continue;

    // Map each inter-token position of the written text onto the spoken
    // stream. A written token may normalize to several spoken tokens or to
    // none; positions that collapse together OR their labels.
    std::vector<std::string> stream;
    std::vector<size_t> positions;
    std::vector<bool> labels;
    for (size_t i = 0; i < written.size(); ++i) {
      for (auto& tok : textnorm::normalize_written_to_spoken(written[i]))
        stream.push_back(std::move(tok));
      if (i + 1 < written.size()) {
        bool label = ends_sentence(written[i]);
        if (!positions.empty() && positions.back() == stream.size()) {
          labels.back() = labels.back() || label;
        } else {
          positions.push_back(stream.size());
          labels.push_back(label);
        }
      }
    }
    for (size_t p = 0; p < positions.size(); ++p) {
      // A boundary needs tokens on both sides.
      if (positions[p] == 0 || positions[p] >= stream.size()) continue;
      out.push_back({window_features(stream, positions[p], window), labels[p]});
    }
  }
  return out;
}

double BoundaryModel::predict(const std::vector<std::string>& features) const {
  double z = bias_;
  for (const auto& f : features) {
    auto it = weights_.find(f);
    if (it != weights_.end()) z += it->second;
  }
  return clamp_prob(sigmoid(z));
}

BoundaryModel train_boundary_model(const std::vector<BoundaryExample>& examples,
                                   int epochs, double learning_rate,
                                   uint64_t seed,
                                   std::vector<double>* epoch_losses) {
  bool has_pos = false, has_neg = false;
  for (const auto& ex : examples) (ex.boundary ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg)
    throw Error(ErrorCode::DegenerateLabels,
                "training needs both boundary and non-boundary examples");
  if (epochs < 1 || !(learning_rate > 0.0))
    throw Error(ErrorCode::InvalidArgument,
                "epochs must be >= 1 and learning_rate positive");

  // Window width is uniform across examples by construction.
  const int window = static_cast<int>(examples.front().features.size() / 2);

  std::unordered_map<std::string, double> weights;
  double bias = 0.0;

  auto avg_loss = [&]() {
    double loss = 0.0;
    for (const auto& ex : examples) {
      double z = bias;
      for (const auto& f : ex.features) {
        auto it = weights.find(f);
        if (it != weights.end()) z += it->second;
      }
      double p = clamp_prob(sigmoid(z));
      loss -= ex.boundary ? std::log(p) : std::log(1.0 - p);
    }
    return loss / static_cast<double>(examples.size());
  };

  // One shuffle, reused every epoch.
  std::vector<size_t> order(examples.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);

  double lr = learning_rate;
  double prev_loss = avg_loss();
  for (int epoch = 0; epoch < epochs && lr >= 1e-12; ++epoch) {
    auto snapshot_weights = weights;
    double snapshot_bias = bias;

    for (size_t idx : order) {
      const auto& ex = examples[idx];
      double z = bias;
      for (const auto& f : ex.features) {
        auto it = weights.find(f);
        if (it != weights.end()) z += it->second;
      }
      double g = (ex.boundary ? 1.0 : 0.0) - sigmoid(z);
      bias += lr * g;
      for (const auto& f : ex.features) weights[f] += lr * g;
    }

    double loss = avg_loss();
    if (loss > prev_loss) {
      weights = std::move(snapshot_weights);
      bias = snapshot_bias;
      lr /= 2.0;
      --epoch;  // retry the epoch at the smaller rate
      continue;
    }
    prev_loss = loss;
    if (epoch_losses) epoch_losses->push_back(loss);
  }

  return BoundaryModel(window, bias, std::move(weights));
}

std::string BoundaryModel::format() const {
  std::string out = "window\t" + std::to_string(window_) + "\n";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "bias\t%.17g\n", bias_);
  out += buf;

  std::vector<std::pair<std::string, double>> rows(weights_.begin(),
                                                   weights_.end());
  std::sort(rows.begin(), rows.end());
  for (const auto& [feature, weight] : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g", weight);
    out += feature;
    out += '\t';
    out += buf;
    out += '\n';
  }
  return out;
}

BoundaryModel BoundaryModel::parse(const std::string& text) {
  int window = 0;
  double bias = 0.0;
  bool have_window = false, have_bias = false;
  std::unordered_map<std::string, double> weights;

  for (const std::string& line : split_lines(text)) {
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw Error(ErrorCode::MalformedLine, "bad model line: '" + line + "'");
    std::string key = line.substr(0, tab);
    std::string value = line.substr(tab + 1);
    if (key == "window") {
      long long w;
      if (!parse_int64(value, &w) || w < 1)
        throw Error(ErrorCode::MalformedLine, "bad window value: '" + value + "'");
      window = static_cast<int>(w);
      have_window = true;
    } else if (key == "bias") {
      if (!parse_double(value, &bias))
        throw Error(ErrorCode::MalformedLine, "bad bias value: '" + value + "'");
      have_bias = true;
    } else {
      double w;
      if (!parse_double(value, &w))
        throw Error(ErrorCode::MalformedLine, "bad weight: '" + line + "'");
      weights[key] = w;
    }
  }
  if (!have_window || !have_bias)
    throw Error(ErrorCode::MalformedLine, "model file missing window or bias");
  return BoundaryModel(window, bias, std::move(weights));
}

metrics::SegmentedText segment(const textnorm::SpokenText& tokens,
                               const BoundaryModel& model, int min_len,
                               int max_len) {
  if (min_len > max_len)
    throw Error(ErrorCode::Infeasible, "min_len exceeds max_len");
  if (min_len < 1)
    throw Error(ErrorCode::InvalidArgument, "min_len must be >= 1");
  if (tokens.empty())
    throw Error(ErrorCode::InvalidArgument, "cannot segment an empty stream");

  const size_t n = tokens.size();
  const size_t lo = static_cast<size_t>(min_len);
  const size_t hi = static_cast<size_t>(max_len);

  // Position i in [1, n) cuts between tokens[i-1] and tokens[i].
  std::vector<double> log_b(n, 0.0), log_nb(n, 0.0);
  for (size_t i = 1; i < n; ++i) {
    double p = model.predict(window_features(tokens, i, model.window()));
    log_b[i] = std::log(p);
    log_nb[i] = std::log(1.0 - p);
  }

  struct Cell {
    double score = -std::numeric_limits<double>::infinity();
    long long num_segments = 0;
    bool feasible = false;
  };

  // dp[k]: best segmentation of tokens[k..n) given a segment starts at k.
  // Reconstruction scans end positions in increasing order, which yields the
  // leftmost-cut optimum among score/segment-count ties.
  auto solve = [&](size_t last_min) -> std::vector<Cell> {
    std::vector<Cell> dp(n + 1);
    dp[n] = {0.0, 0, true};
    for (size_t k = n; k-- > 0;) {
      double interior = 0.0;  // sum of log_nb over positions inside the segment
      for (size_t j = k + 1; j <= std::min(n, k + hi); ++j) {
        size_t len = j - k;
        if (j < n) {
          if (len >= lo && dp[j].feasible) {
            double cand = interior + log_b[j] + dp[j].score;
            long long segs = 1 + dp[j].num_segments;
            if (!dp[k].feasible || cand > dp[k].score ||
                (cand == dp[k].score && segs < dp[k].num_segments)) {
              dp[k] = {cand, segs, true};
            }
          }
          interior += log_nb[j];
        } else if (len >= last_min) {
          double cand = interior;
          if (!dp[k].feasible || cand > dp[k].score ||
              (cand == dp[k].score && 1 < dp[k].num_segments)) {
            dp[k] = {cand, 1, true};
          }
        }
      }
    }
    return dp;
  };

  std::vector<Cell> dp = solve(lo);
  size_t last_min = lo;
  if (!dp[0].feasible) {
    last_min = 1;  // final-segment exemption
    dp = solve(last_min);
  }

  metrics::SegmentedText out;
  size_t k = 0;
  while (k < n) {
    size_t next = k;
    double interior = 0.0;
    for (size_t j = k + 1; j <= std::min(n, k + hi); ++j) {
      size_t len = j - k;
      bool take = false;
      if (j < n) {
        if (len >= lo && dp[j].feasible) {
          take = interior + log_b[j] + dp[j].score == dp[k].score &&
                 1 + dp[j].num_segments == dp[k].num_segments;
        }
      } else if (len >= last_min) {
        take = interior == dp[k].score && dp[k].num_segments == 1;
      }
      if (take) {
        out.segments.emplace_back(tokens.begin() + static_cast<long>(k),
                                  tokens.begin() + static_cast<long>(j));
        next = j;
        break;
      }
      if (j < n) interior += log_nb[j];
    }
    if (next == k)
      throw std::logic_error("segmentation reconstruction lost its path");
    k = next;
  }
  return out;
}

}  // namespace stkit::segmenter
