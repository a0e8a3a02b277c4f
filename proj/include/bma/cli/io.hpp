#pragma once

#include "bma/error.hpp"
#include "bma/meta.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace bma::cli {

/// Bad user input that is not a syntax error: invalid values, conflicting flags.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Logical column name -> header name in the file, e.g. effect -> "d".
using ColumnMap = std::map<std::string, std::string>;

/// Parses "effect=d,se=se_d" into a column map.
ColumnMap parse_column_map(std::string_view text);

/// One comparison from a study table with columns effect,se[,label] or
/// n1,m1,sd1,n2,m2,sd2[,label]. Every study must be estimable.
Comparison read_studies(std::string_view csv_text, const ColumnMap& map = {});

/// A corpus with a comparison_id column; rows sharing an id form one
/// comparison, in first-appearance order. Empty or NA cells mark a study
/// non-estimable.
std::vector<Comparison> read_corpus(std::string_view csv_text, const ColumnMap& map = {});

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace bma::cli
