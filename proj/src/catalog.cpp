#include "bma/catalog.hpp"

#include "bma/csv.hpp"
#include "bma/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace bma {

namespace {

constexpr int kSchemaVersion = 1;
constexpr std::string_view kHeader = "topic,comparisons,studies,t_location,t_scale,t_df,invgamma_shape,invgamma_scale";

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

int parse_count(const std::string& s, std::size_t line) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v < 0) throw ParseError("invalid count '" + s + "'", line);
  return v;
}

std::string number_text(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

const SubfieldCatalog& SubfieldCatalog::builtin() {
  static const SubfieldCatalog catalog = parse(embedded_catalog_text());
  return catalog;
}

SubfieldCatalog SubfieldCatalog::parse(std::string_view csv_text) {
  const auto rows = parse_csv(csv_text);
  if (rows.size() < 2 || rows[0].fields.size() != 2 || rows[0].fields[0] != "schema_version") {
    throw ParseError("catalog: missing schema_version row", 1);
  }
  SubfieldCatalog cat;
  cat.schema_version_ = parse_count(rows[0].fields[1], rows[0].line);
  if (cat.schema_version_ != kSchemaVersion) {
    throw ParseError("catalog: unsupported schema version " + rows[0].fields[1], rows[0].line);
  }
  std::string header;
  for (std::size_t i = 0; i < rows[1].fields.size(); ++i) header += (i ? "," : "") + rows[1].fields[i];
  if (header != kHeader) throw ParseError("catalog: unexpected header", rows[1].line);

  bool have_pooled = false;
  for (std::size_t r = 2; r < rows.size(); ++r) {
    const auto& f = rows[r].fields;
    const std::size_t line = rows[r].line;
    if (f.size() != 8) throw ParseError("catalog: expected 8 fields", line);
    SubfieldEntry e{f[0],
                    parse_count(f[1], line),
                    parse_count(f[2], line),
                    PriorSpec::student_t(parse_real(f[3], line, "t_location"), parse_real(f[4], line, "t_scale"),
                                         parse_real(f[5], line, "t_df")),
                    PriorSpec::inverse_gamma(parse_real(f[6], line, "invgamma_shape"),
                                             parse_real(f[7], line, "invgamma_scale"))};
    if (e.topic == kPooledTopic) {
      cat.pooled_ = std::move(e);
      have_pooled = true;
    } else {
      cat.topics_.push_back(std::move(e));
    }
  }
  if (!have_pooled) throw ParseError("catalog: no pooled estimate row");
  return cat;
}

std::string SubfieldCatalog::serialize() const {
  std::string out = "schema_version," + std::to_string(schema_version_) + "\n" + std::string(kHeader) + "\n";
  auto row = [&](const SubfieldEntry& e) {
    out += quoted(e.topic) + ',' + std::to_string(e.comparisons) + ',' + std::to_string(e.studies);
    for (double v : e.delta_prior.params()) out += ',' + number_text(v);
    for (double v : e.tau_prior.params()) out += ',' + number_text(v);
    out += '\n';
  };
  for (const auto& e : topics_) row(e);
  row(pooled_);
  return out;
}

CatalogMatch SubfieldCatalog::lookup(std::string_view topic) const {
  const std::string t = trim(topic);
  for (const auto& e : topics_) {
    if (iequals(e.topic, t)) return {e, true};
  }
  return {pooled_, iequals(t, kPooledTopic)};
}

}  // namespace bma
