#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tmc::text {

// ASCII-only case folding; other bytes pass through unchanged so UTF-8 stays intact.
char fold(char c) noexcept;
std::string lower(std::string_view s);

bool is_space(char c) noexcept;
// Alphanumeric in the word-boundary sense: ASCII letters/digits and every non-ASCII byte.
bool is_word_char(char c) noexcept;

std::string trim(std::string_view s);
// Trims and replaces every whitespace run with a single space.
std::string collapse_whitespace(std::string_view s);

// Lowercase, drop every non-alphanumeric byte except whitespace, collapse whitespace.
std::string match_key(std::string_view title);

std::size_t levenshtein(std::string_view a, std::string_view b);
// 1 - lev(a,b)/max(|a|,|b|); two empty strings are identical (1.0).
double similarity(std::string_view a, std::string_view b);

std::vector<std::string> split(std::string_view s, char sep);

// Shortest representation that round-trips to the same double.
std::string format_double(double v);

}  // namespace tmc::text
