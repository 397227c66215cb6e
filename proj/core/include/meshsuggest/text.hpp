#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace meshsuggest {

/// Lowercase (ASCII), trim, and collapse internal whitespace runs to one space.
std::string normalize_name(std::string_view text);

std::string to_lower(std::string_view text);
std::string_view trim(std::string_view text);

/// Split on every occurrence of `sep`; keeps empty fields.
std::vector<std::string> split(std::string_view text, char sep);

/// Split on whitespace runs; drops empty fields.
std::vector<std::string> split_whitespace(std::string_view text);

/// Lowercase alphanumeric runs; everything else separates tokens.
std::vector<std::string> lexical_tokens(std::string_view text);

/// Reads a whole file into lines, stripping a trailing '\r' from each.
/// Throws MissingFile if the file cannot be opened.
std::vector<std::string> read_lines(const std::string& path);

std::string read_file(const std::string& path);

}  // namespace meshsuggest
