#include "corpusops.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "error.hpp"
#include "textutil.hpp"

namespace stkit::corpusops {

std::vector<SentencePair> filter_length(const std::vector<SentencePair>& pairs,
                                        int max_words) {
  if (max_words < 1)
    throw Error(ErrorCode::InvalidArgument, "max_words must be >= 1");
  std::vector<SentencePair> out;
  for (const auto& p : pairs) {
    if (split_tokens(p.source).size() <= static_cast<size_t>(max_words) &&
        split_tokens(p.target).size() <= static_cast<size_t>(max_words)) {
      out.push_back(p);
    }
  }
  return out;
}

std::vector<SentencePair> dedup(const std::vector<SentencePair>& pairs) {
  std::vector<SentencePair> out;
  std::unordered_set<std::string> seen;
  for (const auto& p : pairs) {
    std::string key = p.source + '\t' + p.target;
    if (seen.insert(std::move(key)).second) out.push_back(p);
  }
  return out;
}

LexiconModel LexiconModel::train(const std::vector<SentencePair>& pairs,
                                 int iterations) {
  if (pairs.empty()) throw Error(ErrorCode::EmptyCorpus, "empty corpus");
  if (iterations < 1)
    throw Error(ErrorCode::InvalidArgument, "iterations must be >= 1");

  std::vector<std::vector<std::string>> src(pairs.size()), tgt(pairs.size());
  for (size_t i = 0; i < pairs.size(); ++i) {
    src[i] = split_tokens(pairs[i].source);
    tgt[i] = split_tokens(pairs[i].target);
  }

  LexiconModel model;
  auto& t = model.t_;

  // Uniform initialization over each source word's co-occurring target set.
  for (size_t i = 0; i < pairs.size(); ++i) {
    for (const auto& f : tgt[i]) {
      t[kNullWord][f] = 0.0;
      for (const auto& e : src[i]) t[e][f] = 0.0;
    }
  }
  for (auto& [e, row] : t) {
    const double u = 1.0 / static_cast<double>(row.size());
    for (auto& [f, p] : row) p = u;
  }

  auto log_likelihood = [&]() {
    double ll = 0.0;
    for (size_t i = 0; i < pairs.size(); ++i) {
      if (tgt[i].empty()) continue;
      const double log_norm =
          std::log(static_cast<double>(src[i].size()) + 1.0);
      for (const auto& f : tgt[i]) {
        double sum = t[kNullWord][f];
        for (const auto& e : src[i]) sum += t[e][f];
        ll += std::log(sum) - log_norm;
      }
    }
    return ll;
  };

  model.log_likelihoods_.push_back(log_likelihood());

  for (int iter = 0; iter < iterations; ++iter) {
    std::map<std::string, std::map<std::string, double>> counts;
    for (size_t i = 0; i < pairs.size(); ++i) {
      for (const auto& f : tgt[i]) {
        double denom = t[kNullWord][f];
        for (const auto& e : src[i]) denom += t[e][f];
        counts[kNullWord][f] += t[kNullWord][f] / denom;
        for (const auto& e : src[i]) counts[e][f] += t[e][f] / denom;
      }
    }
    for (auto& [e, row] : counts) {
      double total = 0.0;
      for (const auto& [f, c] : row) total += c;
      if (total <= 0.0) continue;
      for (const auto& [f, c] : row) t[e][f] = c / total;
    }
    model.log_likelihoods_.push_back(log_likelihood());
  }
  return model;
}

double LexiconModel::prob(const std::string& target_word,
                          const std::string& source_word) const {
  auto row = t_.find(source_word);
  if (row == t_.end()) return 0.0;
  auto cell = row->second.find(target_word);
  return cell == row->second.end() ? 0.0 : cell->second;
}

double LexiconModel::max_over_source(
    const std::string& target_word,
    const std::vector<std::string>& source_tokens) const {
  double best = prob(target_word, kNullWord);
  for (const auto& e : source_tokens)
    best = std::max(best, prob(target_word, e));
  return std::max(best, kEpsilon);
}

std::string LexiconModel::format() const {
  struct Row {
    const std::string* target;
    const std::string* source;
    double prob;
  };
  std::vector<Row> rows;
  for (const auto& [e, row] : t_)
    for (const auto& [f, p] : row) rows.push_back({&f, &e, p});
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (*a.target != *b.target) return *a.target < *b.target;
    return *a.source < *b.source;
  });

  std::string out;
  char buf[64];
  for (const Row& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.12g", r.prob);
    out += *r.target;
    out += '\t';
    out += *r.source;
    out += '\t';
    out += buf;
    out += '\n';
  }
  return out;
}

LexiconModel LexiconModel::parse(const std::string& text) {
  LexiconModel model;
  for (const std::string& line : split_lines(text)) {
    if (line.empty()) continue;
    size_t t1 = line.find('\t');
    size_t t2 = t1 == std::string::npos ? std::string::npos
                                        : line.find('\t', t1 + 1);
    double p;
    if (t2 == std::string::npos || !parse_double(line.substr(t2 + 1), &p))
      throw Error(ErrorCode::MalformedLine, "bad lexicon line: '" + line + "'");
    std::string target = line.substr(0, t1);
    std::string source = line.substr(t1 + 1, t2 - t1 - 1);
    model.t_[source][target] = p;
  }
  if (model.t_.empty())
    throw Error(ErrorCode::EmptyCorpus, "lexicon file holds no entries");
  return model;
}

double similarity(const SentencePair& pair, const LexiconModel& forward,
                  const LexiconModel* reverse) {
  std::vector<std::string> src = split_tokens(pair.source);
  std::vector<std::string> tgt = split_tokens(pair.target);
  if (src.empty() || tgt.empty())
    throw Error(ErrorCode::EmptySide, "similarity needs non-empty sides");

  double fwd = 0.0;
  for (const auto& f : tgt) fwd += forward.max_over_source(f, src);
  fwd /= static_cast<double>(tgt.size());
  if (!reverse) return fwd;

  double rev = 0.0;
  for (const auto& e : src) rev += reverse->max_over_source(e, tgt);
  rev /= static_cast<double>(src.size());
  return std::sqrt(fwd * rev);
}

std::vector<SentencePair> filter_similarity(
    const std::vector<SentencePair>& pairs, const LexiconModel& forward,
    const LexiconModel* reverse, double threshold) {
  std::vector<SentencePair> out;
  for (const auto& p : pairs)
    if (similarity(p, forward, reverse) >= threshold) out.push_back(p);
  return out;
}

std::vector<std::string> filter_outlier_scores(
    const std::vector<ScoredItem>& items, double z_threshold) {
  if (items.size() < 2)
    throw Error(ErrorCode::TooFew, "outlier filter needs at least two items");
  if (!(z_threshold > 0.0))
    throw Error(ErrorCode::InvalidArgument, "z_threshold must be positive");

  double mean = 0.0;
  for (const auto& it : items) mean += it.score;
  mean /= static_cast<double>(items.size());
  double var = 0.0;
  for (const auto& it : items) var += (it.score - mean) * (it.score - mean);
  var /= static_cast<double>(items.size());
  const double sigma = std::sqrt(var);

  std::vector<std::string> kept;
  for (const auto& it : items)
    if (std::abs(it.score - mean) <= z_threshold * sigma) kept.push_back(it.id);
  return kept;
}

std::vector<ScoredItem> parse_scores(const std::string& text) {
  std::vector<ScoredItem> out;
  for (const std::string& line : split_lines(text)) {
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    double score;
    if (tab == std::string::npos ||
        !parse_double(line.substr(tab + 1), &score))
      throw Error(ErrorCode::MalformedLine, "bad score line: '" + line + "'");
    out.push_back({line.substr(0, tab), score});
  }
  return out;
}

}  // namespace stkit::corpusops
