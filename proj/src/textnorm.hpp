#ifndef STKIT_TEXTNORM_HPP
#define STKIT_TEXTNORM_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace stkit::textnorm {

// Spoken-form text is a sequence of lowercase tokens containing only letters
// and intra-word apostrophes: the shape of raw ASR output.
using SpokenText = std::vector<std::string>;

// Renders a digit string (optionally with one decimal point) as American
// English cardinal words: lowercase, space-separated, no hyphens, no "and".
// The fractional part is read digit by digit after "point".
// Throws NotANumber on pattern mismatch, TooLarge when the integer part
// is >= 10^15.
std::string number_to_words(std::string_view numeral);

// Lowercases, strips punctuation (keeping intra-word apostrophes), and
// expands numerals to words. Unknown symbols are dropped, so this never
// throws. Mixed alphanumeric tokens split at digit/letter boundaries;
// digit runs too large for number_to_words are read digit by digit.
SpokenText normalize_written_to_spoken(std::string_view text);

// True iff every token satisfies the spoken-form invariants: non-empty,
// lowercase letters only, apostrophes flanked by letters, no digits.
bool is_spoken_form(const SpokenText& tokens);
bool is_spoken_token(std::string_view token);

// Shared character-level helpers (UTF-8 code points). Case mapping covers
// ASCII and Latin-1; code points beyond that pass through unchanged.
std::vector<uint32_t> utf8_decode(std::string_view s);
void utf8_encode(uint32_t cp, std::string* out);
uint32_t to_lower_cp(uint32_t cp);
bool is_letter_cp(uint32_t cp);

// Lowercases a whole token with the same mapping normalize uses.
std::string lowercase(std::string_view token);

}  // namespace stkit::textnorm

#endif  // STKIT_TEXTNORM_HPP
