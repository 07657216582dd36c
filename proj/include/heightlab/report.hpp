#pragma once

#include "heightlab/bundle.hpp"
#include "heightlab/enumerate.hpp"

#include <iosfwd>
#include <string>

namespace heightlab {

inline constexpr const char* kSchemaVersion = "1";

/// CSV rows (B, count, region, lambda, strategy, wall_ms), one per grid point.
void write_series_csv(std::ostream& out, const CountSeries& series, const Rational& lambda,
                      const std::string& strategy, double wall_ms, bool header = true);

/// CSV rows (B, total, on_split_certified, on_not_split, on_undetermined,
/// on_accumulating, thin_members).
void write_bundle_csv(std::ostream& out, const BundleReport& report, bool header = true);

} // namespace heightlab
