// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef GRIDPOP_SERVICES_HPP
#define GRIDPOP_SERVICES_HPP

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "gridpop/zonal.hpp"

namespace gridpop {

/// Sanitary-installation ratios per block of persons_per_unit users
/// (BS 6465-1 defaults: 4 WCs + 4 urinals + 4 washbasins per 100 males,
/// 8 WCs + 8 washbasins per 100 females).
struct MaleFixtures {
    int wc = 4;
    int urinal = 4;
    int washbasin = 4;
};

struct FemaleFixtures {
    int wc = 8;
    int washbasin = 8;
};

struct FacilityStandard {
    std::string name = "BS6465-1";
    MaleFixtures male_fixtures_per_100;
    FemaleFixtures female_fixtures_per_100;
    int persons_per_unit = 100;

    static FacilityStandard bs6465() { return FacilityStandard{}; }
};

struct NeedsRow {
    std::string ward_name;
    double no_of_persons = 0.0;
    long long toilets_need = 0;
    long long male_units = 0;
    long long female_units = 0;
};

/// In the default combined mode both standards are applied to the total
/// ward population with no gender split, and the units columns count water
/// closets only (4 per male block, 8 per female block); urinals and
/// washbasins ride along implicitly. Splitting by gender shares the
/// population between the two standards instead.
struct NeedsOptions {
    bool split_by_gender = false;
    double male_share = 0.5;
};

struct ToiletNeed {
    long long toilets_need = 0;
    long long male_units = 0;
    long long female_units = 0;
};

/// need = ceil(pop / persons_per_unit), zero for an empty ward.
ToiletNeed toilets_need(double population,
                        const FacilityStandard& standard = {},
                        const NeedsOptions& opts = {});

/// ceil(pop * units_per_100 / 100) — generic per-capita standard.
long long per_capita_need(double population, double units_per_100);

/// One NeedsRow per zonal row, in input order (population = _sum).
std::vector<NeedsRow> needs_table(const std::vector<ZonalRow>& zonal_rows,
                                  const FacilityStandard& standard = {},
                                  const NeedsOptions& opts = {});

/// Header ward_name,no_of_persons,toilets_need,male_units,female_units.
/// Empty input yields a header-only CSV.
std::string needs_csv(const std::vector<NeedsRow>& rows);
void needs_csv_file(const std::vector<NeedsRow>& rows,
                    const std::filesystem::path& path);

std::vector<NeedsRow> parse_needs_csv(std::istream& in);
std::vector<NeedsRow> parse_needs_csv(const std::string& text);

/// Rows ordered by descending need (stable for ties).
std::vector<NeedsRow> sorted_by_need(std::vector<NeedsRow> rows);

/// Plain-text note describing the standard and the unit-count convention.
std::string needs_manifest_text(const FacilityStandard& standard,
                                const NeedsOptions& opts = {});

extern const char* const kNeedsCsvHeader;

} // namespace gridpop

#endif // GRIDPOP_SERVICES_HPP
