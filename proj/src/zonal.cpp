// Apache License, Version 2.0, refer to LICENSE.txt

#include "gridpop/zonal.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "gridpop/csv.hpp"
#include "gridpop/errors.hpp"
#include "gridpop/numeric.hpp"

namespace gridpop {

const char* const kZonalCsvHeader =
  "ward_name,lga_code,lga_name,state_code,state_name,_count,_sum,_mean";

namespace {

struct CellRange {
    std::size_t row0 = 0, row1 = 0, col0 = 0, col1 = 0;
    bool empty = true;
};

// Cells whose rects can intersect the zone's bounding box. Cells that merely
// touch the box contribute zero coverage, so including them is harmless.
CellRange candidate_cells(const Grid& g, const Rect& bbox)
{
    const double cs = g.cellsize();
    const double top = g.yll() + static_cast<double>(g.nrows()) * cs;
    const auto nr = static_cast<long long>(g.nrows());
    const auto nc = static_cast<long long>(g.ncols());

    long long c0 = static_cast<long long>(std::floor((bbox.min_x - g.xll()) / cs));
    long long c1 = static_cast<long long>(std::floor((bbox.max_x - g.xll()) / cs));
    long long r0 = static_cast<long long>(std::floor((top - bbox.max_y) / cs));
    long long r1 = static_cast<long long>(std::floor((top - bbox.min_y) / cs));

    CellRange range;
    if (c1 < 0 || c0 >= nc || r1 < 0 || r0 >= nr) {
        return range;
    }
    range.empty = false;
    range.col0 = static_cast<std::size_t>(std::max<long long>(c0, 0));
    range.col1 = static_cast<std::size_t>(std::min<long long>(c1, nc - 1));
    range.row0 = static_cast<std::size_t>(std::max<long long>(r0, 0));
    range.row1 = static_cast<std::size_t>(std::min<long long>(r1, nr - 1));
    return range;
}

ZoneStats accumulate_zone(const Grid& g, const Zone& zone, const ZonalOptions& opts)
{
    CellRange range;
    if (opts.bbox_prefilter) {
        range = candidate_cells(g, zone.bounding_box());
    } else {
        range = CellRange{ 0, g.nrows() - 1, 0, g.ncols() - 1, false };
    }

    ZoneStats stats;
    if (range.empty) {
        return stats;
    }

    KahanSum count;
    KahanSum sum;
    for (std::size_t row = range.row0; row <= range.row1; ++row) {
        for (std::size_t col = range.col0; col <= range.col1; ++col) {
            const double v = g.values()[row * g.ncols() + col];
            if (g.is_nodata(v)) {
                continue;
            }
            const CellIndex c{ row, col };
            if (opts.mode == CoverageMode::Center) {
                if (zone.contains(g.cell_center(c))) {
                    count.add(1.0);
                    sum.add(v);
                }
            } else {
                const double w = zone.coverage_fraction(g.cell_rect(c));
                if (w > 0.0) {
                    count.add(w);
                    sum.add(w * v);
                }
            }
        }
    }
    stats.count = count.value();
    stats.sum = sum.value();
    if (stats.count > 0.0) {
        stats.mean = stats.sum / stats.count;
    }
    return stats;
}

} // namespace

std::vector<ZonalRow> zonal_stats(const Grid& g,
                                  const ZoneSet& zs,
                                  const ZonalOptions& opts)
{
    if (!crs_compatible(g.crs_tag(), zs.crs_tag())) {
        throw CrsMismatch("raster CRS '" + g.crs_tag() +
                          "' does not match zone CRS '" + zs.crs_tag() + "'");
    }
    std::vector<ZonalRow> rows;
    rows.reserve(zs.zones().size());
    for (const Zone& zone : zs.zones()) {
        rows.push_back({ zone.attrs(), accumulate_zone(g, zone, opts) });
    }
    return rows;
}

std::string export_zonal_csv(const std::vector<ZonalRow>& rows)
{
    if (rows.empty()) {
        throw EmptyInput("zonal export needs at least one row");
    }
    std::string out(kZonalCsvHeader);
    out += '\n';
    for (const ZonalRow& row : rows) {
        out += csv::join_record({
          row.attrs.ward_name,
          row.attrs.lga_code,
          row.attrs.lga_name,
          row.attrs.state_code,
          row.attrs.state_name,
          format_double(row.stats.count),
          format_double(row.stats.sum),
          row.stats.mean ? format_double(*row.stats.mean) : std::string(),
        });
        out += '\n';
    }
    return out;
}

void export_zonal_csv_file(const std::vector<ZonalRow>& rows,
                           const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) {
        throw IoFailure("cannot open output file: " + path.string());
    }
    out << export_zonal_csv(rows);
    if (!out) {
        throw IoFailure("failed writing zonal CSV to " + path.string());
    }
}

std::vector<ZonalRow> parse_zonal_csv(std::istream& in)
{
    const auto records = csv::read_records(in);
    if (records.empty() || csv::join_record(records[0]) != kZonalCsvHeader) {
        throw SchemaError(std::string("zonal CSV header must be exactly '") +
                          kZonalCsvHeader + "'");
    }
    std::vector<ZonalRow> rows;
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& rec = records[i];
        if (rec.size() != 8) {
            throw ParseError("zonal CSV row " + std::to_string(i) +
                             ": expected 8 fields, got " +
                             std::to_string(rec.size()));
        }
        const auto number = [&](const std::string& field,
                                const char* what) -> double {
            const auto parsed = parse_double(field);
            if (!parsed) {
                throw ParseError("zonal CSV row " + std::to_string(i) + ": " +
                                 what + " '" + field + "' is not a number");
            }
            return *parsed;
        };
        ZonalRow row;
        row.attrs = { rec[0], rec[1], rec[2], rec[3], rec[4] };
        row.stats.count = number(rec[5], "_count");
        row.stats.sum = number(rec[6], "_sum");
        if (!rec[7].empty()) {
            row.stats.mean = number(rec[7], "_mean");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<ZonalRow> parse_zonal_csv(const std::string& text)
{
    std::istringstream in(text);
    return parse_zonal_csv(in);
}

double aggregate_total(const std::vector<ZonalRow>& rows)
{
    KahanSum total;
    for (const ZonalRow& row : rows) {
        total.add(row.stats.sum);
    }
    return total.value();
}

} // namespace gridpop
