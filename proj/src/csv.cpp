#include "bma/csv.hpp"

#include "bma/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace bma {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<CsvRow> parse_csv(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  std::vector<CsvRow> rows;
  CsvRow row{1, {}};
  std::string field;
  bool quoted = false;
  bool any = false;
  std::size_t line = 1;

  auto end_row = [&] {
    row.fields.push_back(std::move(field));
    field.clear();
    const bool blank = row.fields.size() == 1 && trim(row.fields[0]).empty() && !any;
    if (!blank) rows.push_back(std::move(row));
    row = CsvRow{line + 1, {}};
    any = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        quoted = true;
        any = true;
        break;
      case ',':
        row.fields.push_back(std::move(field));
        field.clear();
        any = true;
        break;
      case '\r': break;
      case '\n':
        end_row();
        ++line;
        break;
      default: field += c;
    }
  }
  if (quoted) throw ParseError("unterminated quoted field", row.line);
  if (!field.empty() || !row.fields.empty() || any) end_row();
  return rows;
}

double parse_real(std::string_view field, std::size_t line, std::string_view column) {
  const std::string t = trim(field);
  double v = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (!t.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (t.empty() || ec != std::errc() || ptr != last) {
    throw ParseError("column '" + std::string(column) + "': '" + t + "' is not a number", line);
  }
  if (!std::isfinite(v)) {
    throw ParseError("column '" + std::string(column) + "': non-finite value '" + t + "'", line);
  }
  return v;
}

}  // namespace bma
