#ifndef STKIT_TEXTUTIL_HPP
#define STKIT_TEXTUTIL_HPP

#include <string>
#include <string_view>
#include <vector>

namespace stkit {

// Whitespace-delimited tokens (ASCII whitespace).
std::vector<std::string> split_tokens(std::string_view text);

std::string join_tokens(const std::vector<std::string>& tokens,
                        std::string_view sep = " ");

// Splits on '\n'; a trailing newline does not produce an empty final line.
// '\r' before a newline is stripped.
std::vector<std::string> split_lines(std::string_view text);

// Fixed-format doubles for serialized files; locale-independent.
std::string format_double(double v, int precision);

// strtod over the whole string; returns false on trailing garbage,
// empty input, or non-finite values.
bool parse_double(std::string_view s, double* out);
bool parse_int64(std::string_view s, long long* out);

}  // namespace stkit

#endif  // STKIT_TEXTUTIL_HPP
