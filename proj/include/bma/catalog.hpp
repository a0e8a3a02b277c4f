#pragma once

#include "bma/distributions.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace bma {

struct SubfieldEntry {
  std::string topic;
  int comparisons;
  int studies;
  PriorSpec delta_prior;  // t(0, scale, df)
  PriorSpec tau_prior;    // invgamma(shape, scale)

  friend bool operator==(const SubfieldEntry&, const SubfieldEntry&) = default;
};

struct CatalogMatch {
  SubfieldEntry entry;
  /// False when the topic was not found and the pooled entry was substituted.
  bool matched;
};

/// Subfield-specific priors keyed by Cochrane review group topic.
class SubfieldCatalog {
 public:
  static constexpr std::string_view kPooledTopic = "Pooled estimate";

  /// The catalog compiled into the library.
  static const SubfieldCatalog& builtin();

  /// Parses the versioned CSV layout produced by serialize().
  static SubfieldCatalog parse(std::string_view csv_text);
  std::string serialize() const;

  int schema_version() const noexcept { return schema_version_; }
  /// Topic entries, excluding the pooled estimate, in catalog order.
  const std::vector<SubfieldEntry>& topics() const noexcept { return topics_; }
  const SubfieldEntry& pooled() const noexcept { return pooled_; }

  /// Case-insensitive exact topic match; unknown topics yield the pooled entry.
  CatalogMatch lookup(std::string_view topic) const;

 private:
  int schema_version_ = 0;
  std::vector<SubfieldEntry> topics_;
  SubfieldEntry pooled_{"", 0, 0, PriorSpec::point_mass(0.0), PriorSpec::point_mass(0.0)};
};

std::string_view embedded_catalog_text();

/// 64-bit FNV-1a hash, used to pin the embedded catalog.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace bma
