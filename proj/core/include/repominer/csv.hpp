#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace repominer::csv {

/// Quotes per RFC 4180 only when the field needs it.
std::string escape_field(std::string_view field);

std::string join_row(const std::vector<std::string>& fields);

/// RFC 4180 parser; accepts LF or CRLF records, a trailing newline is not an
/// extra record.
std::vector<std::vector<std::string>> parse(std::string_view content);

}  // namespace repominer::csv
