#include "textnorm.hpp"

#include <cstdint>

#include "error.hpp"

namespace stkit::textnorm {

namespace {

const char* kOnes[] = {
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight",
    "nine", "ten", "eleven", "twelve", "thirteen", "fourteen", "fifteen",
    "sixteen", "seventeen", "eighteen", "nineteen"};
const char* kTens[] = {"", "", "twenty", "thirty", "forty", "fifty", "sixty",
                       "seventy", "eighty", "ninety"};
const char* kScales[] = {"", "thousand", "million", "billion", "trillion"};

constexpr uint64_t kMaxInteger = 1000000000000000ull;  // 10^15

void append_word(std::string* out, const char* w) {
  if (!out->empty()) out->push_back(' ');
  out->append(w);
}

void render_under_1000(uint64_t v, std::string* out) {
  if (v >= 100) {
    append_word(out, kOnes[v / 100]);
    append_word(out, "hundred");
    v %= 100;
    if (v == 0) return;
  }
  if (v >= 20) {
    append_word(out, kTens[v / 10]);
    if (v % 10) append_word(out, kOnes[v % 10]);
  } else if (v > 0 || out->empty()) {
    append_word(out, kOnes[v]);
  }
}

std::string render_integer(uint64_t v) {
  std::string out;
  if (v == 0) return "zero";
  uint64_t groups[5] = {0, 0, 0, 0, 0};  // v < 10^15 -> at most 5 groups
  int n = 0;
  while (v > 0) {
    groups[n++] = v % 1000;
    v /= 1000;
  }
  for (int i = n - 1; i >= 0; --i) {
    if (groups[i] == 0) continue;
    render_under_1000(groups[i], &out);
    if (i > 0) append_word(&out, kScales[i]);
  }
  return out;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

std::string render_digit_by_digit(std::string_view digits) {
  std::string out;
  for (char c : digits) append_word(&out, kOnes[c - '0']);
  return out;
}

}  // namespace

std::string number_to_words(std::string_view numeral) {
  size_t dot = numeral.find('.');
  std::string_view int_part =
      dot == std::string_view::npos ? numeral : numeral.substr(0, dot);
  std::string_view frac_part =
      dot == std::string_view::npos ? std::string_view{} : numeral.substr(dot + 1);

  if (!all_digits(int_part) ||
      (dot != std::string_view::npos && !all_digits(frac_part))) {
    throw Error(ErrorCode::NotANumber,
                "not an integer or decimal numeral: '" + std::string(numeral) + "'");
  }

  size_t first = int_part.find_first_not_of('0');
  size_t significant = first == std::string_view::npos ? 0 : int_part.size() - first;
  if (significant > 15) {
    throw Error(ErrorCode::TooLarge,
                "integer part of '" + std::string(numeral) + "' is >= 10^15");
  }
  uint64_t value = 0;
  for (char c : int_part) value = value * 10 + static_cast<uint64_t>(c - '0');
  if (value >= kMaxInteger) {
    throw Error(ErrorCode::TooLarge,
                "integer part of '" + std::string(numeral) + "' is >= 10^15");
  }

  std::string out = render_integer(value);
  if (dot != std::string_view::npos) {
    out += " point ";
    out += render_digit_by_digit(frac_part);
  }
  return out;
}

std::vector<uint32_t> utf8_decode(std::string_view s) {
  std::vector<uint32_t> cps;
  cps.reserve(s.size());
  size_t i = 0;
  while (i < s.size()) {
    unsigned char b = static_cast<unsigned char>(s[i]);
    uint32_t cp = 0;
    size_t len = 0;
    if (b < 0x80) {
      cp = b;
      len = 1;
    } else if ((b & 0xE0) == 0xC0) {
      cp = b & 0x1F;
      len = 2;
    } else if ((b & 0xF0) == 0xE0) {
      cp = b & 0x0F;
      len = 3;
    } else if ((b & 0xF8) == 0xF0) {
      cp = b & 0x07;
      len = 4;
    } else {
      ++i;  // stray continuation byte: drop
      continue;
    }
    if (i + len > s.size()) {
      ++i;
      continue;
    }
    bool ok = true;
    for (size_t k = 1; k < len; ++k) {
      unsigned char cont = static_cast<unsigned char>(s[i + k]);
      if ((cont & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (cont & 0x3F);
    }
    if (!ok) {
      ++i;
      continue;
    }
    cps.push_back(cp);
    i += len;
  }
  return cps;
}

void utf8_encode(uint32_t cp, std::string* out) {
  if (cp < 0x80) {
    out->push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out->push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out->push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out->push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

uint32_t to_lower_cp(uint32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 32;
  // Latin-1 uppercase block, excluding the multiplication sign.
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
  return cp;
}

namespace {

bool is_separator_cp(uint32_t cp) {
  // Non-ASCII punctuation that shows up in ordinary prose. Everything in the
  // general-punctuation and CJK/fullwidth punctuation blocks separates.
  if (cp == 0xA0) return true;                     // no-break space
  if (cp >= 0x2000 && cp <= 0x206F) return true;
  if (cp >= 0x3000 && cp <= 0x303F) return true;
  if (cp >= 0xFF01 && cp <= 0xFF20) return true;
  if (cp >= 0xFF3B && cp <= 0xFF40) return true;
  if (cp >= 0xFF5B && cp <= 0xFF65) return true;
  return false;
}

}  // namespace

bool is_letter_cp(uint32_t cp) {
  if (cp >= 'a' && cp <= 'z') return true;
  if (cp >= 'A' && cp <= 'Z') return true;
  if (cp < 0x80) return false;  // remaining ASCII: digits, punctuation, controls
  if (cp <= 0xBF) return false;  // Latin-1 symbols and controls
  if (cp == 0xD7 || cp == 0xF7) return false;
  if (cp <= 0xFF) return true;  // Latin-1 letters
  return !is_separator_cp(cp);
}

std::string lowercase(std::string_view token) {
  std::string out;
  for (uint32_t cp : utf8_decode(token)) utf8_encode(to_lower_cp(cp), &out);
  return out;
}

namespace {

constexpr uint32_t kApostrophe = 0x27;
constexpr uint32_t kRightSingleQuote = 0x2019;

bool is_ascii_digit(uint32_t cp) { return cp >= '0' && cp <= '9'; }

// Scans a numeral starting at cps[i]: digits with optional comma grouping
// (',' followed by exactly three digits) and an optional '.' fraction.
// Returns the index past the numeral and the de-grouped digit string.
size_t scan_numeral(const std::vector<uint32_t>& cps, size_t i,
                    std::string* digits) {
  digits->clear();
  size_t n = cps.size();
  while (i < n && is_ascii_digit(cps[i])) digits->push_back(static_cast<char>(cps[i++]));
  while (i + 3 < n && cps[i] == ',' && is_ascii_digit(cps[i + 1]) &&
         is_ascii_digit(cps[i + 2]) && is_ascii_digit(cps[i + 3]) &&
         (i + 4 >= n || !is_ascii_digit(cps[i + 4]))) {
    digits->push_back(static_cast<char>(cps[i + 1]));
    digits->push_back(static_cast<char>(cps[i + 2]));
    digits->push_back(static_cast<char>(cps[i + 3]));
    i += 4;
  }
  if (i + 1 < n && cps[i] == '.' && is_ascii_digit(cps[i + 1])) {
    digits->push_back('.');
    ++i;
    while (i < n && is_ascii_digit(cps[i])) digits->push_back(static_cast<char>(cps[i++]));
  }
  return i;
}

}  // namespace

SpokenText normalize_written_to_spoken(std::string_view text) {
  std::vector<uint32_t> cps = utf8_decode(text);
  SpokenText tokens;
  std::string current;

  auto flush = [&]() {
    if (!current.empty()) {
      tokens.push_back(current);
      current.clear();
    }
  };

  size_t i = 0;
  const size_t n = cps.size();
  while (i < n) {
    uint32_t cp = cps[i];
    if (is_ascii_digit(cp)) {
      flush();
      std::string digits;
      i = scan_numeral(cps, i, &digits);
      std::string words;
      try {
        words = number_to_words(digits);
      } catch (const Error&) {
        // Integer part too large: read the digits individually.
        std::string stripped;
        for (char c : digits)
          if (c != '.') stripped.push_back(c);
        words = render_digit_by_digit(stripped);
      }
      size_t start = 0;
      while (start < words.size()) {
        size_t sp = words.find(' ', start);
        if (sp == std::string::npos) sp = words.size();
        tokens.push_back(words.substr(start, sp - start));
        start = sp + 1;
      }
      continue;
    }
    if (is_letter_cp(cp)) {
      utf8_encode(to_lower_cp(cp), &current);
      ++i;
      continue;
    }
    if ((cp == kApostrophe || cp == kRightSingleQuote) && !current.empty() &&
        i + 1 < n && is_letter_cp(cps[i + 1]) && is_letter_cp(cps[i - 1])) {
      current.push_back('\'');
      ++i;
      continue;
    }
    flush();
    ++i;
  }
  flush();
  return tokens;
}

bool is_spoken_token(std::string_view token) {
  std::vector<uint32_t> cps = utf8_decode(token);
  if (cps.empty()) return false;
  for (size_t i = 0; i < cps.size(); ++i) {
    uint32_t cp = cps[i];
    if (cp == kApostrophe) {
      if (i == 0 || i + 1 == cps.size()) return false;
      if (!is_letter_cp(cps[i - 1]) || !is_letter_cp(cps[i + 1])) return false;
      continue;
    }
    if (!is_letter_cp(cp)) return false;
    if (to_lower_cp(cp) != cp) return false;
  }
  return true;
}

bool is_spoken_form(const SpokenText& tokens) {
  for (const auto& t : tokens)
    if (!is_spoken_token(t)) return false;
  return true;
}

}  // namespace stkit::textnorm
