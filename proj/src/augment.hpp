#ifndef STKIT_AUGMENT_HPP
#define STKIT_AUGMENT_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "textnorm.hpp"

namespace stkit::augment {

// word -> confusable alternatives, e.g. "two" -> {"to", "too"}. Keys and
// values must be valid spoken-form tokens and no word may map to itself.
class HomophoneTable {
 public:
  HomophoneTable() = default;

  // Lines "word<TAB>alt1 alt2 ...". Blank lines are skipped.
  static HomophoneTable parse(const std::string& text);

  void add(const std::string& word, const std::vector<std::string>& alts);
  const std::vector<std::string>* find(const std::string& word) const;
  std::string format() const;
  size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, std::vector<std::string>> entries_;
};

struct CorruptionConfig {
  double homophone_rate = 0.0;
  double sub_rate = 0.0;
  double del_rate = 0.0;
  double ins_rate = 0.0;
  std::vector<std::string> vocab;  // pool for substitutions/insertions
  uint64_t seed = 0;
};

// Throws InvalidArgument when rates are out of range, sum over 1, or the
// vocab is empty while sub/ins rates are positive.
void validate(const CorruptionConfig& config);

struct SentencePair {
  std::string source;
  std::string target;
  std::string id;  // optional
};

// Simulated ASR errors: per token a single seeded draw picks homophone swap
// (when the token has table entries), random substitution, deletion,
// insertion-after, or identity. Deterministic per (inputs, seed).
textnorm::SpokenText corrupt(const textnorm::SpokenText& text,
                             const HomophoneTable& table,
                             const CorruptionConfig& config);

// source := corrupt(normalize(source)), target untouched. Pair i uses a seed
// derived from (config.seed, i), so results do not depend on processing
// order.
std::vector<SentencePair> augment_bitext(const std::vector<SentencePair>& pairs,
                                         const HomophoneTable& table,
                                         const CorruptionConfig& config);

// Bitext TSV: "source<TAB>target", one pair per line.
std::vector<SentencePair> parse_bitext(const std::string& text);
std::string format_bitext(const std::vector<SentencePair>& pairs);

}  // namespace stkit::augment

#endif  // STKIT_AUGMENT_HPP
