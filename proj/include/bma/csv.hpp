#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace bma {

struct CsvRow {
  std::size_t line;
  std::vector<std::string> fields;
};

/// RFC 4180-style reader: comma separated, double-quoted fields with ""
/// escapes, LF or CRLF line ends. Blank lines are skipped. Throws ParseError
/// on an unterminated quote.
std::vector<CsvRow> parse_csv(std::string_view text);

/// Parses a decimal number with '.' as separator, independent of locale.
/// Throws ParseError on anything else, including nan and inf.
double parse_real(std::string_view field, std::size_t line, std::string_view column);

std::string trim(std::string_view s);

}  // namespace bma
