#pragma once

#include "bma/marginal.hpp"
#include "bma/meta.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bma::cli {

struct ForestRow {
  std::string label;
  double estimate;
  double lower;
  double upper;
  /// Drawn as a diamond rather than a square with whiskers.
  bool summary;
};

/// Studies in input order with estimate +/- 1.96 se, then the Fixed, Random
/// and Averaged posterior rows (mean and 95% credible interval) when present.
std::vector<ForestRow> forest_rows(const Comparison& comparison, const std::optional<PosteriorSummary>& fixed,
                                   const std::optional<PosteriorSummary>& random,
                                   const std::optional<PosteriorSummary>& averaged);

/// Self-contained SVG; output depends only on the rows.
std::string render_forest_svg(std::span<const ForestRow> rows);

}  // namespace bma::cli
