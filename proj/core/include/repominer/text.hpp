#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace repominer::text {

/// Splits on '\n'; a trailing newline does not produce an empty final line.
/// One trailing '\r' per line is stripped.
std::vector<std::string> split_lines(std::string_view content);

std::vector<std::string> split(std::string_view s, char sep);

bool is_blank(std::string_view line);

std::string_view lstrip(std::string_view s);
std::string_view rstrip(std::string_view s);

std::string to_lower(std::string_view s);

bool starts_with(std::string_view s, std::string_view prefix);
bool ends_with(std::string_view s, std::string_view suffix);

/// Replaces invalid UTF-8 sequences with U+FFFD; valid input passes through
/// byte-identical.
std::string lossy_utf8(std::string_view bytes);

/// A NUL byte within the first 8000 bytes marks content as binary.
bool looks_binary(std::string_view bytes);

std::string iso8601_utc(std::int64_t epoch_seconds);
std::optional<std::int64_t> parse_iso8601_utc(std::string_view s);

/// Integral values print without a decimal point; everything else uses the
/// shortest representation that round-trips through a double.
std::string format_number(double value);

/// Lowercased file extension including the dot, or "" when absent.
std::string extension_of(std::string_view path);

}  // namespace repominer::text
