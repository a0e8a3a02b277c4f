#include "bma/cli/forest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace bma::cli {

namespace {

constexpr double kZ95 = 1.959963984540054;
constexpr double kRowHeight = 24.0;
constexpr double kTop = 30.0;
constexpr double kLabelWidth = 190.0;
constexpr double kPlotWidth = 360.0;
constexpr double kTextWidth = 170.0;

std::string fixed(double v, int digits) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, digits);
  std::string s(buf, end);
  return s == "-0.00" || s == "-0.0" ? s.substr(1) : s;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

double nice_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) return m * mag;
  }
  return 10.0 * mag;
}

}  // namespace

std::vector<ForestRow> forest_rows(const Comparison& comparison, const std::optional<PosteriorSummary>& fixed_post,
                                   const std::optional<PosteriorSummary>& random_post,
                                   const std::optional<PosteriorSummary>& averaged) {
  std::vector<ForestRow> rows;
  for (const auto& s : comparison.studies) {
    rows.push_back({s.label, s.effect, s.effect - kZ95 * s.se, s.effect + kZ95 * s.se, false});
  }
  auto add = [&](const char* label, const std::optional<PosteriorSummary>& p) {
    if (p) rows.push_back({label, p->mean, p->ci_lower, p->ci_upper, true});
  };
  add("Fixed", fixed_post);
  add("Random", random_post);
  add("Averaged", averaged);
  return rows;
}

std::string render_forest_svg(std::span<const ForestRow> rows) {
  double lo = 0.0, hi = 0.0;
  for (const auto& r : rows) {
    lo = std::min(lo, r.lower);
    hi = std::max(hi, r.upper);
  }
  if (hi - lo < 1e-9) hi = lo + 1.0;
  const double step = nice_step(hi - lo);
  lo = std::floor(lo / step) * step;
  hi = std::ceil(hi / step) * step;
  auto x = [&](double v) { return kLabelWidth + (v - lo) / (hi - lo) * kPlotWidth; };

  const double plot_bottom = kTop + kRowHeight * static_cast<double>(rows.size() + 1);
  const double width = kLabelWidth + kPlotWidth + kTextWidth;
  const double height = plot_bottom + 40.0;

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(width, 0) + "\" height=\"" + fixed(height, 0) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fixed(width - 10, 1) + "\" y=\"18\" text-anchor=\"end\" font-weight=\"bold\">Estimate [95% CI]</text>\n";
  // Zero reference line.
  if (lo <= 0.0 && hi >= 0.0) {
    svg += "<line x1=\"" + fixed(x(0), 2) + "\" y1=\"" + fixed(kTop, 2) + "\" x2=\"" + fixed(x(0), 2) + "\" y2=\"" +
           fixed(plot_bottom, 2) + "\" stroke=\"#888\" stroke-dasharray=\"4,3\"/>\n";
  }

  bool separator = false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const double y = kTop + kRowHeight * static_cast<double>(i + 1);
    if (r.summary && !separator) {
      separator = true;
      const double ys = y - kRowHeight / 2;
      svg += "<line x1=\"10\" y1=\"" + fixed(ys, 2) + "\" x2=\"" + fixed(width - 10, 2) + "\" y2=\"" + fixed(ys, 2) +
             "\" stroke=\"black\"/>\n";
    }
    svg += "<text x=\"10\" y=\"" + fixed(y + 4, 2) + "\"" + (r.summary ? " font-weight=\"bold\"" : "") + ">" +
           escape(r.label) + "</text>\n";
    if (r.summary) {
      svg += "<polygon points=\"" + fixed(x(r.lower), 2) + "," + fixed(y, 2) + " " + fixed(x(r.estimate), 2) + "," +
             fixed(y - 7, 2) + " " + fixed(x(r.upper), 2) + "," + fixed(y, 2) + " " + fixed(x(r.estimate), 2) + "," +
             fixed(y + 7, 2) + "\" fill=\"black\"/>\n";
    } else {
      svg += "<line x1=\"" + fixed(x(r.lower), 2) + "\" y1=\"" + fixed(y, 2) + "\" x2=\"" + fixed(x(r.upper), 2) +
             "\" y2=\"" + fixed(y, 2) + "\" stroke=\"black\"/>\n";
      svg += "<rect x=\"" + fixed(x(r.estimate) - 4, 2) + "\" y=\"" + fixed(y - 4, 2) +
             "\" width=\"8\" height=\"8\" fill=\"black\"/>\n";
    }
    svg += "<text x=\"" + fixed(width - 10, 1) + "\" y=\"" + fixed(y + 4, 2) + "\" text-anchor=\"end\">" +
           fixed(r.estimate, 2) + " [" + fixed(r.lower, 2) + ", " + fixed(r.upper, 2) + "]</text>\n";
  }

  svg += "<line x1=\"" + fixed(x(lo), 2) + "\" y1=\"" + fixed(plot_bottom, 2) + "\" x2=\"" + fixed(x(hi), 2) +
         "\" y2=\"" + fixed(plot_bottom, 2) + "\" stroke=\"black\"/>\n";
  const int ticks = static_cast<int>(std::lround((hi - lo) / step));
  const int tick_digits = std::max(0, -static_cast<int>(std::floor(std::log10(step) + 1e-9)));
  for (int t = 0; t <= ticks; ++t) {
    const double v = lo + step * t;
    svg += "<line x1=\"" + fixed(x(v), 2) + "\" y1=\"" + fixed(plot_bottom, 2) + "\" x2=\"" + fixed(x(v), 2) +
           "\" y2=\"" + fixed(plot_bottom + 5, 2) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fixed(x(v), 2) + "\" y=\"" + fixed(plot_bottom + 18, 2) + "\" text-anchor=\"middle\">" +
           fixed(v, tick_digits) + "</text>\n";
  }
  svg += "<text x=\"" + fixed(x((lo + hi) / 2), 2) + "\" y=\"" + fixed(plot_bottom + 34, 2) +
         "\" text-anchor=\"middle\">Standardized mean difference</text>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace bma::cli
