#include "bma/cli/io.hpp"

#include "bma/csv.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <unordered_map>

namespace bma::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr const char* kRawColumns[] = {"n1", "m1", "sd1", "n2", "m2", "sd2"};

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Resolves logical column names to positions in the header row.
class Columns {
 public:
  Columns(const CsvRow& header, const ColumnMap& map) : map_(map) {
    for (std::size_t i = 0; i < header.fields.size(); ++i) index_[lower(trim(header.fields[i]))] = i;
    for (const auto& [logical, actual] : map_) {
      if (!index_.count(lower(actual))) {
        throw ParseError("mapped column '" + actual + "' for '" + logical + "' not in header", header.line);
      }
    }
  }

  std::optional<std::size_t> find(const std::string& logical) const {
    auto m = map_.find(logical);
    const std::string name = lower(m == map_.end() ? logical : m->second);
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  ColumnMap map_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct Layout {
  bool raw = false;
  std::size_t effect = 0, se = 0;
  std::size_t raw_cols[6] = {};
  std::optional<std::size_t> label;
};

Layout detect_layout(const Columns& cols, std::size_t header_line) {
  Layout l;
  l.label = cols.find("label");
  auto e = cols.find("effect"), s = cols.find("se");
  if (e && s) {
    l.effect = *e;
    l.se = *s;
    return l;
  }
  l.raw = true;
  for (int i = 0; i < 6; ++i) {
    auto c = cols.find(kRawColumns[i]);
    if (!c) {
      throw ParseError("header needs effect,se or n1,m1,sd1,n2,m2,sd2 columns (missing '" +
                           std::string(kRawColumns[i]) + "')",
                       header_line);
    }
    l.raw_cols[i] = *c;
  }
  return l;
}

const std::string& field(const CsvRow& row, std::size_t i) {
  if (i >= row.fields.size()) {
    throw ParseError("expected at least " + std::to_string(i + 1) + " fields, got " + std::to_string(row.fields.size()),
                     row.line);
  }
  return row.fields[i];
}

bool missing(const std::string& f) {
  const std::string t = lower(trim(f));
  return t.empty() || t == "na";
}

double cell(const CsvRow& row, std::size_t i, std::string_view name, bool allow_missing) {
  const std::string& f = field(row, i);
  if (missing(f)) {
    if (allow_missing) return kNaN;
    throw ParseError("column '" + std::string(name) + "' is empty", row.line);
  }
  return parse_real(f, row.line, name);
}

Study read_study(const CsvRow& row, const Layout& l, bool allow_missing, std::size_t ordinal) {
  Study s;
  s.label = l.label ? trim(field(row, *l.label)) : "";
  if (s.label.empty()) s.label = "Study " + std::to_string(ordinal);
  if (!l.raw) {
    s.effect = cell(row, l.effect, "effect", allow_missing);
    s.se = cell(row, l.se, "se", allow_missing);
  } else {
    double v[6];
    bool any_missing = false;
    for (int i = 0; i < 6; ++i) {
      v[i] = cell(row, l.raw_cols[i], kRawColumns[i], allow_missing);
      any_missing = any_missing || std::isnan(v[i]);
    }
    if (any_missing) {
      s.effect = s.se = kNaN;
      return s;
    }
    RawSummary raw{v[0], v[1], v[2], v[3], v[4], v[5]};
    if (!(raw.n1 >= 2 && raw.n2 >= 2 && raw.sd1 >= 0 && raw.sd2 >= 0)) {
      throw InputError("line " + std::to_string(row.line) + ": group sizes must be >= 2 and SDs non-negative");
    }
    try {
      const EffectSize es = smd_from_raw(raw);
      s.effect = es.effect;
      s.se = es.se;
    } catch (const DegenerateDataError& e) {
      if (!allow_missing) throw InputError("line " + std::to_string(row.line) + ": " + e.what());
      s.effect = s.se = kNaN;
    }
    s.raw = raw;
  }
  if (!std::isnan(s.se) && !(s.se > 0.0)) {
    throw InputError("line " + std::to_string(row.line) + ": se must be positive");
  }
  return s;
}

}  // namespace

ColumnMap parse_column_map(std::string_view text) {
  ColumnMap map;
  for (const auto& row : parse_csv(text)) {
    for (const auto& item : row.fields) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw ParseError("--map entries look like effect=<column>, got '" + item + "'");
      const std::string key = lower(trim(std::string_view(item).substr(0, eq)));
      const std::string value = trim(std::string_view(item).substr(eq + 1));
      if (key.empty() || value.empty()) throw ParseError("--map entry '" + item + "' is incomplete");
      map[key] = value;
    }
  }
  return map;
}

Comparison read_studies(std::string_view csv_text, const ColumnMap& map) {
  const auto rows = parse_csv(csv_text);
  if (rows.empty()) throw ParseError("input is empty", 1);
  if (rows.size() == 1) throw ParseError("no data rows after the header", rows[0].line);
  const Columns cols(rows[0], map);
  const Layout layout = detect_layout(cols, rows[0].line);
  Comparison c;
  for (std::size_t r = 1; r < rows.size(); ++r) c.studies.push_back(read_study(rows[r], layout, false, r));
  return c;
}

std::vector<Comparison> read_corpus(std::string_view csv_text, const ColumnMap& map) {
  const auto rows = parse_csv(csv_text);
  if (rows.empty()) throw ParseError("input is empty", 1);
  const Columns cols(rows[0], map);
  const auto id_col = cols.find("comparison_id");
  if (!id_col) throw ParseError("header has no comparison_id column", rows[0].line);
  const Layout layout = detect_layout(cols, rows[0].line);

  std::vector<Comparison> corpus;
  std::unordered_map<std::string, std::size_t> where;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const std::string id = trim(field(rows[r], *id_col));
    if (id.empty()) throw ParseError("empty comparison_id", rows[r].line);
    auto [it, inserted] = where.emplace(id, corpus.size());
    if (inserted) corpus.push_back(Comparison{id, {}, std::nullopt});
    Comparison& c = corpus[it->second];
    c.studies.push_back(read_study(rows[r], layout, true, c.size() + 1));
  }
  if (corpus.empty()) throw ParseError("no data rows after the header", rows[0].line);
  return corpus;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << contents;
  if (!out) throw InputError("failed writing '" + path + "'");
}

}  // namespace bma::cli
