#include "fusion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>
#include <unordered_set>

#include "error.hpp"
#include "textutil.hpp"

namespace stkit::fusion {

namespace {

constexpr const char* kFieldSep = " ||| ";

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    size_t sep = line.find(kFieldSep, start);
    if (sep == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, sep - start));
    start = sep + 5;
  }
}

std::string score_string(const std::map<std::string, double>& scores) {
  std::string out;
  char buf[64];
  for (const auto& [name, value] : scores) {
    if (!out.empty()) out.push_back(' ');
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    out += name;
    out += '=';
    out += buf;
  }
  return out;
}

}  // namespace

NBestSet parse_nbest(const std::string& text) {
  NBestSet set;
  std::unordered_map<std::string, size_t> list_index;
  // per list: token-sequence key -> hypothesis index
  std::vector<std::unordered_map<std::string, size_t>> hyp_index;

  for (const std::string& line : split_lines(text)) {
    if (line.empty()) continue;
    std::vector<std::string> fields = split_fields(line);
    if (fields.size() != 3)
      throw Error(ErrorCode::MalformedLine,
                  "expected 'id ||| tokens ||| scores': '" + line + "'");

    std::vector<std::string> tokens = split_tokens(fields[1]);
    if (tokens.empty())
      throw Error(ErrorCode::MalformedLine,
                  "hypothesis has no tokens: '" + line + "'");

    std::map<std::string, double> scores;
    for (const std::string& part : split_tokens(fields[2])) {
      size_t eq = part.find('=');
      double value;
      if (eq == std::string::npos || eq == 0 ||
          !parse_double(part.substr(eq + 1), &value))
        throw Error(ErrorCode::MalformedLine,
                    "bad score field '" + part + "' in: '" + line + "'");
      scores[part.substr(0, eq)] = value;
    }

    auto [it, fresh] = list_index.try_emplace(fields[0], set.lists.size());
    if (fresh) {
      set.lists.push_back({fields[0], {}});
      hyp_index.emplace_back();
    }
    NBestList& list = set.lists[it->second];
    auto& index = hyp_index[it->second];
    std::string key = join_tokens(tokens);
    auto [hit, new_hyp] = index.try_emplace(key, list.hypotheses.size());
    if (new_hyp) {
      list.hypotheses.push_back({std::move(tokens), std::move(scores)});
    } else {
      for (auto& [name, value] : scores)
        list.hypotheses[hit->second].scores[name] = value;  // later wins
    }
  }
  return set;
}

std::string format_nbest(const NBestSet& set) {
  std::string out;
  for (const auto& list : set.lists) {
    for (const auto& hyp : list.hypotheses) {
      out += list.sentence_id;
      out += kFieldSep;
      out += join_tokens(hyp.tokens);
      out += kFieldSep;
      out += score_string(hyp.scores);
      out += '\n';
    }
  }
  return out;
}

NBestList merge_nbest(const std::vector<NBestList>& lists,
                      MissingScorePolicy policy) {
  if (lists.empty())
    throw Error(ErrorCode::InvalidArgument, "nothing to merge");
  for (const auto& l : lists)
    if (l.sentence_id != lists.front().sentence_id)
      throw Error(ErrorCode::IdMismatch,
                  "cannot merge lists for '" + lists.front().sentence_id +
                      "' and '" + l.sentence_id + "'");

  NBestList merged{lists.front().sentence_id, {}};
  std::unordered_map<std::string, size_t> index;
  for (const auto& l : lists) {
    for (const auto& hyp : l.hypotheses) {
      std::string key = join_tokens(hyp.tokens);
      auto [it, fresh] = index.try_emplace(key, merged.hypotheses.size());
      if (fresh) {
        merged.hypotheses.push_back(hyp);
      } else {
        for (const auto& [name, value] : hyp.scores)
          merged.hypotheses[it->second].scores[name] = value;
      }
    }
  }

  // Every model named anywhere in the merged list.
  std::vector<std::string> models;
  std::unordered_set<std::string> seen;
  for (const auto& hyp : merged.hypotheses)
    for (const auto& [name, value] : hyp.scores)
      if (seen.insert(name).second) models.push_back(name);

  if (policy == MissingScorePolicy::kDrop) {
    std::vector<Hypothesis> kept;
    for (auto& hyp : merged.hypotheses)
      if (hyp.scores.size() == models.size()) kept.push_back(std::move(hyp));
    merged.hypotheses = std::move(kept);
  } else {
    for (const auto& model : models) {
      double worst = 0.0;
      bool found = false;
      for (const auto& hyp : merged.hypotheses) {
        auto it = hyp.scores.find(model);
        if (it == hyp.scores.end()) continue;
        worst = found ? std::min(worst, it->second) : it->second;
        found = true;
      }
      for (auto& hyp : merged.hypotheses)
        hyp.scores.try_emplace(model, worst);
    }
  }
  return merged;
}

NBestSet merge_nbest_sets(const std::vector<NBestSet>& sets,
                          MissingScorePolicy policy) {
  std::vector<std::string> id_order;
  std::unordered_map<std::string, std::vector<NBestList>> by_id;
  for (const auto& set : sets) {
    for (const auto& list : set.lists) {
      auto [it, fresh] = by_id.try_emplace(list.sentence_id);
      if (fresh) id_order.push_back(list.sentence_id);
      it->second.push_back(list);
    }
  }
  NBestSet out;
  for (const auto& id : id_order)
    out.lists.push_back(merge_nbest(by_id[id], policy));
  return out;
}

double length_penalty(size_t length, double alpha) {
  return std::pow((5.0 + static_cast<double>(length)) / 6.0, alpha);
}

std::string WeightVector::format() const {
  std::string out;
  char buf[64];
  for (const auto& [model, weight] : model_weights) {
    std::snprintf(buf, sizeof(buf), "%.12g", weight);
    out += model;
    out += '\t';
    out += buf;
    out += '\n';
  }
  std::snprintf(buf, sizeof(buf), "alpha\t%.12g\n", alpha);
  out += buf;
  return out;
}

WeightVector WeightVector::parse(const std::string& text) {
  WeightVector w;
  for (const std::string& line : split_lines(text)) {
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    double value;
    if (tab == std::string::npos || !parse_double(line.substr(tab + 1), &value))
      throw Error(ErrorCode::MalformedLine, "bad weight line: '" + line + "'");
    std::string name = line.substr(0, tab);
    if (name == "alpha")
      w.alpha = value;
    else
      w.model_weights[name] = value;
  }
  bool any_nonzero = false;
  for (const auto& [name, value] : w.model_weights)
    if (value != 0.0) any_nonzero = true;
  if (!any_nonzero)
    throw Error(ErrorCode::InvalidArgument,
                "weights need at least one nonzero model");
  return w;
}

NBestList rescore(const NBestList& list, const WeightVector& weights) {
  struct Scored {
    double combined;
    size_t original;
  };
  std::vector<Scored> scored;
  scored.reserve(list.hypotheses.size());
  for (size_t i = 0; i < list.hypotheses.size(); ++i) {
    const Hypothesis& hyp = list.hypotheses[i];
    double sum = 0.0;
    for (const auto& [model, weight] : weights.model_weights) {
      auto it = hyp.scores.find(model);
      if (it == hyp.scores.end())
        throw Error(ErrorCode::MissingScore,
                    "hypothesis in '" + list.sentence_id +
                        "' lacks a score for model '" + model + "'");
      sum += weight * it->second;
    }
    scored.push_back({sum / length_penalty(hyp.tokens.size(), weights.alpha), i});
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const Scored& a, const Scored& b) {
                     return a.combined > b.combined;
                   });

  NBestList out{list.sentence_id, {}};
  out.hypotheses.reserve(scored.size());
  for (const auto& s : scored) out.hypotheses.push_back(list.hypotheses[s.original]);
  return out;
}

NBestSet rescore_set(const NBestSet& set, const WeightVector& weights) {
  NBestSet out;
  out.lists.reserve(set.lists.size());
  for (const auto& list : set.lists) out.lists.push_back(rescore(list, weights));
  return out;
}

std::vector<std::vector<std::string>> top1_tokens(const NBestSet& set) {
  std::vector<std::vector<std::string>> out;
  out.reserve(set.lists.size());
  for (const auto& list : set.lists)
    out.push_back(list.hypotheses.empty() ? std::vector<std::string>{}
                                          : list.hypotheses.front().tokens);
  return out;
}

WeightVector tune_weights_grid(const NBestSet& dev,
                               const metrics::SegmentedText& refs,
                               const Grid& grid,
                               const std::vector<double>& alphas) {
  if (grid.empty() || alphas.empty())
    throw Error(ErrorCode::GridEmpty, "weight grid and alpha list must be non-empty");
  for (const auto& [model, values] : grid)
    if (values.empty())
      throw Error(ErrorCode::GridEmpty, "empty value list for model '" + model + "'");
  if (refs.segments.size() != dev.lists.size())
    throw Error(ErrorCode::RefMismatch,
                "reference segment count does not match dev sentence count");

  std::vector<std::string> models;
  for (const auto& [model, values] : grid) models.push_back(model);  // name order

  std::vector<size_t> idx(models.size(), 0);
  WeightVector best;
  double best_bleu = -1.0;

  bool done = false;
  while (!done) {
    WeightVector current;
    bool any_nonzero = false;
    for (size_t m = 0; m < models.size(); ++m) {
      double w = grid.at(models[m])[idx[m]];
      current.model_weights[models[m]] = w;
      if (w != 0.0) any_nonzero = true;
    }

    // the all-zero point is not a valid weight vector; skip it
    if (any_nonzero) {
      for (double alpha : alphas) {
        current.alpha = alpha;
        metrics::ScoreReport report = metrics::bleu_corpus(
            refs.segments, top1_tokens(rescore_set(dev, current)));
        if (report.bleu > best_bleu) {
          best_bleu = report.bleu;
          best = current;
        }
      }
    }

    // odometer over model value lists, last model fastest
    done = true;
    for (size_t m = models.size(); m-- > 0;) {
      if (++idx[m] < grid.at(models[m]).size()) {
        done = false;
        break;
      }
      idx[m] = 0;
    }
  }
  if (best_bleu < 0.0)
    throw Error(ErrorCode::GridEmpty, "grid holds no nonzero weight point");
  return best;
}

}  // namespace stkit::fusion
