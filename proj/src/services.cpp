// Apache License, Version 2.0, refer to LICENSE.txt

#include "gridpop/services.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gridpop/csv.hpp"
#include "gridpop/errors.hpp"
#include "gridpop/numeric.hpp"

namespace gridpop {

const char* const kNeedsCsvHeader =
  "ward_name,no_of_persons,toilets_need,male_units,female_units";

namespace {

long long blocks_needed(double population, int persons_per_unit)
{
    if (population == 0.0) {
        return 0;
    }
    return static_cast<long long>(
      std::ceil(population / static_cast<double>(persons_per_unit)));
}

void validate_population(double population)
{
    if (!std::isfinite(population)) {
        throw NonFinite("population must be finite");
    }
    if (population < 0.0) {
        throw NegativePopulation("population must be non-negative");
    }
}

void validate_standard(const FacilityStandard& s)
{
    if (s.persons_per_unit <= 0 || s.male_fixtures_per_100.wc <= 0 ||
        s.male_fixtures_per_100.urinal <= 0 ||
        s.male_fixtures_per_100.washbasin <= 0 ||
        s.female_fixtures_per_100.wc <= 0 ||
        s.female_fixtures_per_100.washbasin <= 0) {
        throw std::invalid_argument(
          "facility standard counts must be positive");
    }
}

} // namespace

ToiletNeed toilets_need(double population,
                        const FacilityStandard& standard,
                        const NeedsOptions& opts)
{
    validate_population(population);
    validate_standard(standard);
    if (opts.male_share < 0.0 || opts.male_share > 1.0) {
        throw std::invalid_argument("male_share must be in [0, 1]");
    }

    ToiletNeed out;
    out.toilets_need = blocks_needed(population, standard.persons_per_unit);
    if (!opts.split_by_gender) {
        out.male_units = out.toilets_need * standard.male_fixtures_per_100.wc;
        out.female_units =
          out.toilets_need * standard.female_fixtures_per_100.wc;
    } else {
        const long long male_blocks = blocks_needed(
          population * opts.male_share, standard.persons_per_unit);
        const long long female_blocks = blocks_needed(
          population * (1.0 - opts.male_share), standard.persons_per_unit);
        out.male_units = male_blocks * standard.male_fixtures_per_100.wc;
        out.female_units =
          female_blocks * standard.female_fixtures_per_100.wc;
    }
    return out;
}

long long per_capita_need(double population, double units_per_100)
{
    validate_population(population);
    if (!(units_per_100 > 0.0) || !std::isfinite(units_per_100)) {
        throw std::invalid_argument("units_per_100 must be positive");
    }
    if (population == 0.0) {
        return 0;
    }
    return static_cast<long long>(
      std::ceil(population * units_per_100 / 100.0));
}

std::vector<NeedsRow> needs_table(const std::vector<ZonalRow>& zonal_rows,
                                  const FacilityStandard& standard,
                                  const NeedsOptions& opts)
{
    std::vector<NeedsRow> rows;
    rows.reserve(zonal_rows.size());
    for (const ZonalRow& z : zonal_rows) {
        const ToiletNeed need = toilets_need(z.stats.sum, standard, opts);
        rows.push_back({ z.attrs.ward_name, z.stats.sum, need.toilets_need,
                         need.male_units, need.female_units });
    }
    return rows;
}

std::string needs_csv(const std::vector<NeedsRow>& rows)
{
    std::string out(kNeedsCsvHeader);
    out += '\n';
    for (const NeedsRow& row : rows) {
        out += csv::join_record({
          row.ward_name,
          format_double(row.no_of_persons),
          std::to_string(row.toilets_need),
          std::to_string(row.male_units),
          std::to_string(row.female_units),
        });
        out += '\n';
    }
    return out;
}

void needs_csv_file(const std::vector<NeedsRow>& rows,
                    const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) {
        throw IoFailure("cannot open output file: " + path.string());
    }
    out << needs_csv(rows);
    if (!out) {
        throw IoFailure("failed writing needs CSV to " + path.string());
    }
}

std::vector<NeedsRow> parse_needs_csv(std::istream& in)
{
    const auto records = csv::read_records(in);
    if (records.empty() || csv::join_record(records[0]) != kNeedsCsvHeader) {
        throw SchemaError(std::string("needs CSV header must be exactly '") +
                          kNeedsCsvHeader + "'");
    }
    std::vector<NeedsRow> rows;
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& rec = records[i];
        if (rec.size() != 5) {
            throw ParseError("needs CSV row " + std::to_string(i) +
                             ": expected 5 fields, got " +
                             std::to_string(rec.size()));
        }
        const auto number = [&](const std::string& field,
                                const char* what) -> double {
            const auto parsed = parse_double(field);
            if (!parsed) {
                throw ParseError("needs CSV row " + std::to_string(i) + ": " +
                                 what + " '" + field + "' is not a number");
            }
            return *parsed;
        };
        NeedsRow row;
        row.ward_name = rec[0];
        row.no_of_persons = number(rec[1], "no_of_persons");
        row.toilets_need = static_cast<long long>(number(rec[2], "toilets_need"));
        row.male_units = static_cast<long long>(number(rec[3], "male_units"));
        row.female_units = static_cast<long long>(number(rec[4], "female_units"));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<NeedsRow> parse_needs_csv(const std::string& text)
{
    std::istringstream in(text);
    return parse_needs_csv(in);
}

std::vector<NeedsRow> sorted_by_need(std::vector<NeedsRow> rows)
{
    std::stable_sort(rows.begin(), rows.end(),
                     [](const NeedsRow& a, const NeedsRow& b) {
                         return a.toilets_need > b.toilets_need;
                     });
    return rows;
}

std::string needs_manifest_text(const FacilityStandard& standard,
                                const NeedsOptions& opts)
{
    std::string out;
    out += "facility standard: " + standard.name + "\n";
    out += "persons per toilet block: " +
           std::to_string(standard.persons_per_unit) + "\n";
    out += "male fixtures per block: " +
           std::to_string(standard.male_fixtures_per_100.wc) + " WC, " +
           std::to_string(standard.male_fixtures_per_100.urinal) +
           " urinal, " +
           std::to_string(standard.male_fixtures_per_100.washbasin) +
           " washbasin\n";
    out += "female fixtures per block: " +
           std::to_string(standard.female_fixtures_per_100.wc) + " WC, " +
           std::to_string(standard.female_fixtures_per_100.washbasin) +
           " washbasin\n";
    if (opts.split_by_gender) {
        out += "population split: male share " +
               format_double(opts.male_share) + ", female share " +
               format_double(1.0 - opts.male_share) + "\n";
    } else {
        out += "population split: none (both standards applied to the total "
               "ward population)\n";
    }
    out += "note: the male_units and female_units columns count water "
           "closets only (" +
           std::to_string(standard.male_fixtures_per_100.wc) + " and " +
           std::to_string(standard.female_fixtures_per_100.wc) +
           " per block); urinals and washbasins are specified by the "
           "standard but not tallied in those columns.\n";
    return out;
}

} // namespace gridpop
