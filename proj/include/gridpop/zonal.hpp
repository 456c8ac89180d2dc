// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef GRIDPOP_ZONAL_HPP
#define GRIDPOP_ZONAL_HPP

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "gridpop/raster.hpp"
#include "gridpop/zones.hpp"

namespace gridpop {

/// Per-zone statistics. count is the number of contributing cells (an
/// integer in Center mode, a fractional coverage total in Weighted mode);
/// sum is the population total; mean is sum/count and is undefined when no
/// cell contributes.
struct ZoneStats {
    double count = 0.0;
    double sum = 0.0;
    std::optional<double> mean;
};

struct ZonalRow {
    ZoneAttributes attrs;
    ZoneStats stats;
};

struct ZonalOptions {
    CoverageMode mode = CoverageMode::Weighted;
    /// Restricts the cell scan to each zone's bounding box. Results are
    /// bit-identical with the filter on or off; it exists so the fast path
    /// can be verified against the exhaustive one.
    bool bbox_prefilter = true;
};

/// Count/sum/mean of grid values per zone. Nodata cells contribute nothing.
/// In Center mode a cell belongs to a zone iff its center is inside; in
/// Weighted mode each cell contributes its exact coverage fraction w (count
/// accumulates w, sum accumulates w * value). Accumulation is compensated
/// and runs in fixed row-major order per zone, so results are deterministic
/// and zones may be processed concurrently. Overlapping zones are allowed
/// and computed independently.
std::vector<ZonalRow> zonal_stats(const Grid& g,
                                  const ZoneSet& zs,
                                  const ZonalOptions& opts = {});

/// CSV with header ward_name,lga_code,lga_name,state_code,state_name,
/// _count,_sum,_mean; one row per zone in input order; numbers in shortest
/// round-trip form; an undefined mean is an empty field.
std::string export_zonal_csv(const std::vector<ZonalRow>& rows);
void export_zonal_csv_file(const std::vector<ZonalRow>& rows,
                           const std::filesystem::path& path);

/// Re-parses a zonal CSV; the header must match the schema exactly.
std::vector<ZonalRow> parse_zonal_csv(std::istream& in);
std::vector<ZonalRow> parse_zonal_csv(const std::string& text);

/// Total persons across zones (compensated, input order). Zero when empty.
double aggregate_total(const std::vector<ZonalRow>& rows);

extern const char* const kZonalCsvHeader;

} // namespace gridpop

#endif // GRIDPOP_ZONAL_HPP
