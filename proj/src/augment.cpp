#include "augment.hpp"

#include "error.hpp"
#include "rng.hpp"
#include "textutil.hpp"

namespace stkit::augment {

HomophoneTable HomophoneTable::parse(const std::string& text) {
  HomophoneTable table;
  for (const std::string& line : split_lines(text)) {
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw Error(ErrorCode::MalformedLine,
                  "homophone line needs 'word<TAB>alternatives': '" + line + "'");
    std::string word = line.substr(0, tab);
    std::vector<std::string> alts = split_tokens(line.substr(tab + 1));
    table.add(word, alts);
  }
  return table;
}

void HomophoneTable::add(const std::string& word,
                         const std::vector<std::string>& alts) {
  if (!textnorm::is_spoken_token(word))
    throw Error(ErrorCode::InvalidArgument,
                "homophone key is not a spoken-form token: '" + word + "'");
  if (alts.empty())
    throw Error(ErrorCode::InvalidArgument,
                "homophone entry for '" + word + "' has no alternatives");
  for (const auto& alt : alts) {
    if (!textnorm::is_spoken_token(alt))
      throw Error(ErrorCode::InvalidArgument,
                  "homophone alternative is not a spoken-form token: '" + alt + "'");
    if (alt == word)
      throw Error(ErrorCode::InvalidArgument,
                  "'" + word + "' may not map to itself");
  }
  entries_[word] = alts;
}

const std::vector<std::string>* HomophoneTable::find(const std::string& word) const {
  auto it = entries_.find(word);
  return it == entries_.end() ? nullptr : &it->second;
}

std::string HomophoneTable::format() const {
  std::string out;
  for (const auto& [word, alts] : entries_) {
    out += word;
    out += '\t';
    out += join_tokens(alts);
    out += '\n';
  }
  return out;
}

void validate(const CorruptionConfig& config) {
  const double rates[] = {config.homophone_rate, config.sub_rate,
                          config.del_rate, config.ins_rate};
  double sum = 0.0;
  for (double r : rates) {
    if (!(r >= 0.0 && r <= 1.0))
      throw Error(ErrorCode::InvalidArgument, "rates must lie in [0, 1]");
    sum += r;
  }
  if (sum > 1.0 + 1e-12)
    throw Error(ErrorCode::InvalidArgument, "rates must sum to at most 1");
  if ((config.sub_rate > 0.0 || config.ins_rate > 0.0) && config.vocab.empty())
    throw Error(ErrorCode::InvalidArgument,
                "substitution/insertion rates need a non-empty vocab");
  for (const auto& w : config.vocab)
    if (!textnorm::is_spoken_token(w))
      throw Error(ErrorCode::InvalidArgument,
                  "vocab word is not a spoken-form token: '" + w + "'");
}

namespace {

textnorm::SpokenText corrupt_validated(const textnorm::SpokenText& text,
                                       const HomophoneTable& table,
                                       const CorruptionConfig& config,
                                       uint64_t seed) {
  Rng rng(seed);
  textnorm::SpokenText out;
  out.reserve(text.size());

  const double h_end = config.homophone_rate;
  const double s_end = h_end + config.sub_rate;
  const double d_end = s_end + config.del_rate;
  const double i_end = d_end + config.ins_rate;

  for (const std::string& token : text) {
    double u = rng.uniform();
    if (u < h_end) {
      const auto* alts = table.find(token);
      if (alts) {
        out.push_back((*alts)[rng.below(alts->size())]);
      } else {
        out.push_back(token);  // no entry: the draw falls through to identity
      }
    } else if (u < s_end) {
      out.push_back(config.vocab[rng.below(config.vocab.size())]);
    } else if (u < d_end) {
      // deleted
    } else if (u < i_end) {
      out.push_back(token);
      out.push_back(config.vocab[rng.below(config.vocab.size())]);
    } else {
      out.push_back(token);
    }
  }
  return out;
}

}  // namespace

textnorm::SpokenText corrupt(const textnorm::SpokenText& text,
                             const HomophoneTable& table,
                             const CorruptionConfig& config) {
  validate(config);
  return corrupt_validated(text, table, config, config.seed);
}

std::vector<SentencePair> augment_bitext(const std::vector<SentencePair>& pairs,
                                         const HomophoneTable& table,
                                         const CorruptionConfig& config) {
  validate(config);
  std::vector<SentencePair> out;
  out.reserve(pairs.size());
  for (size_t i = 0; i < pairs.size(); ++i) {
    uint64_t pair_seed = derive_seed(config.seed, static_cast<uint64_t>(i));
    textnorm::SpokenText spoken =
        textnorm::normalize_written_to_spoken(pairs[i].source);
    out.push_back(
        {join_tokens(corrupt_validated(spoken, table, config, pair_seed)),
         pairs[i].target, pairs[i].id});
  }
  return out;
}

std::vector<SentencePair> parse_bitext(const std::string& text) {
  std::vector<SentencePair> out;
  for (const std::string& line : split_lines(text)) {
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw Error(ErrorCode::MalformedLine,
                  "bitext line needs 'source<TAB>target': '" + line + "'");
    out.push_back({line.substr(0, tab), line.substr(tab + 1), ""});
  }
  return out;
}

std::string format_bitext(const std::vector<SentencePair>& pairs) {
  std::string out;
  for (const auto& p : pairs) {
    out += p.source;
    out += '\t';
    out += p.target;
    out += '\n';
  }
  return out;
}

}  // namespace stkit::augment
