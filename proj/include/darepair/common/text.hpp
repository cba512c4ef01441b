#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace darepair {

/// Splits on runs of whitespace; never returns empty tokens.
std::vector<std::string> split_whitespace(std::string_view text);

/// Token count under whitespace tokenization.
int whitespace_token_count(std::string_view text);

std::string trim(std::string_view text);

/// Trims and collapses internal whitespace runs to single spaces.
std::string collapse_whitespace(std::string_view text);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Levenshtein distance over characters.
size_t edit_distance(std::string_view a, std::string_view b);

/// Glob-style match supporting '*' (any run) and '?' (any single char).
bool glob_match(std::string_view pattern, std::string_view text);

/// Fixed two-decimal rendering used by report tables ("54.19").
std::string format_fixed2(double value);

/// Human duration: exactly "0s" for zero, "3.25s", "2m 46s", "1h 19m 10s".
std::string format_duration(double seconds);

}  // namespace darepair
