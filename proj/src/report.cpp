#include "heightlab/report.hpp"

#include <ostream>

namespace heightlab {

void write_series_csv(std::ostream& out, const CountSeries& series, const Rational& lambda,
                      const std::string& strategy, double wall_ms, bool header) {
    if (header) out << "B,count,region,lambda,strategy,wall_ms\n";
    for (std::size_t i = 0; i < series.grid.size(); ++i)
        out << to_string(series.grid[i]) << ',' << series.counts[i] << ',' << series.region << ','
            << to_string(lambda) << ',' << strategy << ',' << wall_ms << '\n';
}

void write_bundle_csv(std::ostream& out, const BundleReport& report, bool header) {
    if (header)
        out << "B,total,on_split_certified,on_not_split,on_undetermined,on_accumulating,"
               "thin_members\n";
    for (const auto& row : report.rows)
        out << to_string(row.B) << ',' << row.total << ',' << row.on_split_certified << ','
            << row.on_not_split << ',' << row.on_undetermined << ',' << row.on_accumulating << ','
            << row.thin_members << '\n';
}

} // namespace heightlab
