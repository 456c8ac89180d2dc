// Apache License, Version 2.0, refer to LICENSE.txt

#include "gridpop/services.hpp"

#include <cmath>

#include "doctest.h"
#include "gridpop/errors.hpp"
#include "lagos_fixture.hpp"

using namespace gridpop;

TEST_CASE("toilets_need reference rows")
{
    const auto alagba = toilets_need(1515.259098);
    CHECK(alagba.toilets_need == 16);
    CHECK(alagba.male_units == 64);
    CHECK(alagba.female_units == 128);

    const auto araromi = toilets_need(2.404627);
    CHECK(araromi.toilets_need == 1);
    CHECK(araromi.male_units == 4);
    CHECK(araromi.female_units == 8);

    const auto okepopo = toilets_need(5780.848736);
    CHECK(okepopo.toilets_need == 58);
    CHECK(okepopo.male_units == 232);
    CHECK(okepopo.female_units == 464);

    const auto empty = toilets_need(0.0);
    CHECK(empty.toilets_need == 0);
    CHECK(empty.male_units == 0);
    CHECK(empty.female_units == 0);
}

TEST_CASE("toilets_need reproduces every ward row")
{
    for (const auto& row : lagos::kWardNeeds) {
        const auto need = toilets_need(row.no_of_persons);
        CHECK(need.toilets_need == row.toilets_need);
        CHECK(need.male_units == row.male_units);
        CHECK(need.female_units == row.female_units);
    }
}

TEST_CASE("toilets_need errors")
{
    CHECK_THROWS_AS(toilets_need(-1.0), NegativePopulation);
    CHECK_THROWS_AS(toilets_need(std::nan("")), NonFinite);
    CHECK_THROWS_AS(toilets_need(INFINITY), NonFinite);
}

TEST_CASE("need is monotone and steps at multiples of 100")
{
    long long prev = 0;
    for (double pop = 0.0; pop <= 2000.0; pop += 13.7) {
        const long long need = toilets_need(pop).toilets_need;
        CHECK(need >= prev);
        prev = need;
    }
    for (long long k = 1; k <= 20; ++k) {
        const double at = static_cast<double>(100 * k);
        CHECK(toilets_need(at).toilets_need == k);
        CHECK(toilets_need(std::nextafter(at, 1e9)).toilets_need == k + 1);
    }
}

TEST_CASE("unit ratios are exact whenever need is positive")
{
    for (double pop : { 2.4, 99.9, 100.0, 101.0, 1515.26, 5780.85 }) {
        const auto need = toilets_need(pop);
        if (need.toilets_need > 0) {
            CHECK(need.male_units == 4 * need.toilets_need);
            CHECK(need.female_units == 8 * need.toilets_need);
        }
    }
}

TEST_CASE("per_capita_need")
{
    CHECK(per_capita_need(0.0, 4.0) == 0);
    CHECK(per_capita_need(100.0, 4.0) == 4);
    CHECK(per_capita_need(150.0, 4.0) == 6);
    CHECK_THROWS_AS(per_capita_need(-5.0, 4.0), NegativePopulation);
    CHECK_THROWS_AS(per_capita_need(10.0, 0.0), std::invalid_argument);
}

TEST_CASE("needs_table and CSV")
{
    std::vector<ZonalRow> zonal_rows;
    for (const auto& row : lagos::kWardNeeds) {
        zonal_rows.push_back({ { row.ward_name, "25020", "Lagos Island",
                                 "LA", "Lagos" },
                               { 1.0, row.no_of_persons, row.no_of_persons } });
    }
    const auto rows = needs_table(zonal_rows);
    REQUIRE(rows.size() == lagos::kWardNeeds.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].ward_name == lagos::kWardNeeds[i].ward_name);
        CHECK(rows[i].toilets_need == lagos::kWardNeeds[i].toilets_need);
        CHECK(rows[i].male_units == lagos::kWardNeeds[i].male_units);
        CHECK(rows[i].female_units == lagos::kWardNeeds[i].female_units);
    }

    SUBCASE("empty input yields a header-only CSV")
    {
        CHECK(needs_csv({}) == std::string(kNeedsCsvHeader) + "\n");
    }

    SUBCASE("csv round-trips")
    {
        const auto parsed = parse_needs_csv(needs_csv(rows));
        REQUIRE(parsed.size() == rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            CHECK(parsed[i].ward_name == rows[i].ward_name);
            CHECK(parsed[i].no_of_persons == rows[i].no_of_persons);
            CHECK(parsed[i].toilets_need == rows[i].toilets_need);
            CHECK(parsed[i].male_units == rows[i].male_units);
            CHECK(parsed[i].female_units == rows[i].female_units);
        }
    }

    SUBCASE("top five wards by need")
    {
        const auto sorted = sorted_by_need(rows);
        REQUIRE(sorted.size() >= 5);
        CHECK(sorted[0].ward_name == "Okepopo East");
        CHECK(sorted[1].ward_name == "Epetedo West");
        CHECK(sorted[2].ward_name == "Oke-Arin/Idumota");
        CHECK(sorted[3].ward_name == "Epetedo East");
        CHECK(sorted[4].ward_name == "Lafiaji");
    }
}

TEST_CASE("manifest text names the standard and the unit convention")
{
    const std::string text = needs_manifest_text(FacilityStandard::bs6465());
    CHECK(text.find("BS6465-1") != std::string::npos);
    CHECK(text.find("water closets only") != std::string::npos);
    CHECK(text.find("4 WC, 4 urinal, 4 washbasin") != std::string::npos);
    CHECK(text.find("8 WC, 8 washbasin") != std::string::npos);
}

TEST_CASE("gender split option")
{
    NeedsOptions split;
    split.split_by_gender = true;
    split.male_share = 0.5;
    // 1000 people: 500 male -> 5 blocks -> 20 WCs; 500 female -> 40 WCs.
    const auto need = toilets_need(1000.0, FacilityStandard::bs6465(), split);
    CHECK(need.toilets_need == 10);
    CHECK(need.male_units == 20);
    CHECK(need.female_units == 40);
}
