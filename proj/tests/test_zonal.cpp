// Apache License, Version 2.0, refer to LICENSE.txt

#include "gridpop/zonal.hpp"

#include <random>

#include "doctest.h"
#include "gridpop/errors.hpp"
#include "lagos_fixture.hpp"
#include "test_support.hpp"

using namespace gridpop;
using testsupport::rect_zone;

namespace {

ZoneSet single_zone(Zone z, std::string crs = "")
{
    std::vector<Zone> zones;
    zones.push_back(std::move(z));
    return ZoneSet(std::move(zones), std::move(crs));
}

} // namespace

TEST_CASE("whole-cell zones give identical results in both modes")
{
    // All-ones 3x3 grid, zone exactly covering the 2x2 south-west block.
    const Grid g(3, 3, 0, 0, 1, -9999,
                 std::vector<double>(9, 1.0));
    const ZoneSet zs = single_zone(rect_zone(Rect(0, 0, 2, 2), "block"));

    for (CoverageMode mode : { CoverageMode::Center, CoverageMode::Weighted }) {
        ZonalOptions opts;
        opts.mode = mode;
        const auto rows = zonal_stats(g, zs, opts);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].stats.count == 4.0);
        CHECK(rows[0].stats.sum == 4.0);
        CHECK(rows[0].stats.mean == 1.0);
    }
}

TEST_CASE("published ward rows satisfy mean = sum / count")
{
    for (const auto& row : lagos::kWardStats) {
        const double mean = row.sum / row.count;
        CHECK(std::abs(mean - row.mean) <= 1e-9 * std::abs(row.mean));
    }
}

TEST_CASE("weighted stats on a 2x2 grid")
{
    // North row [1, 2], south row [3, 4].
    const Grid g(2, 2, 0, 0, 1, -9999, { 1, 2, 3, 4 });

    SUBCASE("left column fully covered")
    {
        const ZoneSet zs = single_zone(rect_zone(Rect(0, 0, 1, 2), "left"));
        ZonalOptions opts;
        opts.mode = CoverageMode::Weighted;
        const auto rows = zonal_stats(g, zs, opts);
        CHECK(rows[0].stats.count == 2.0);
        CHECK(rows[0].stats.sum == 4.0); // cells 1 and 3
        CHECK(rows[0].stats.mean == 2.0);
    }

    SUBCASE("diagonal triangle covering the lower-left half: analytic")
    {
        // The hypotenuse runs corner to corner, so the analytic coverage is
        // exact: one full cell, two half cells, one empty corner. (An exact
        // lattice-aligned diagonal is the one case a fixed point-sampling
        // oracle cannot resolve below ~2.5e-3, so this geometry is checked
        // against the closed form instead.)
        const Polygon triangle(
          Ring({ Point(0, 0), Point(2, 0), Point(0, 2) }));
        const Zone zone({ triangle },
                        { "tri", "25020", "Lagos Island", "LA", "Lagos" });
        CHECK(zone.coverage_fraction(g.cell_rect({ 1, 0 })) == 1.0);
        CHECK(zone.coverage_fraction(g.cell_rect({ 0, 0 })) ==
              doctest::Approx(0.5).epsilon(1e-12));
        CHECK(zone.coverage_fraction(g.cell_rect({ 1, 1 })) ==
              doctest::Approx(0.5).epsilon(1e-12));
        CHECK(zone.coverage_fraction(g.cell_rect({ 0, 1 })) == 0.0);
    }

    SUBCASE("generic triangle matches the supersampling oracle")
    {
        const Polygon triangle(
          Ring({ Point(0.03, -0.11), Point(2.07, 0.02), Point(-0.09, 1.94) }));
        const Zone zone({ triangle },
                        { "tri", "25020", "Lagos Island", "LA", "Lagos" });
        for (std::size_t row = 0; row < 2; ++row) {
            for (std::size_t col = 0; col < 2; ++col) {
                const Rect cell = g.cell_rect({ row, col });
                const double exact = zone.coverage_fraction(cell);
                const double sampled =
                  testsupport::supersampled_coverage(triangle, cell);
                CHECK(std::abs(exact - sampled) <= 1e-3);
            }
        }
    }
}

TEST_CASE("nodata cells contribute nothing in either mode")
{
    const Grid g(2, 2, 0, 0, 1, -9999, { 1, -9999, 3, -9999 });
    const ZoneSet zs = single_zone(rect_zone(Rect(0, 0, 2, 2), "all"));
    for (CoverageMode mode : { CoverageMode::Center, CoverageMode::Weighted }) {
        ZonalOptions opts;
        opts.mode = mode;
        const auto rows = zonal_stats(g, zs, opts);
        CHECK(rows[0].stats.count == 2.0);
        CHECK(rows[0].stats.sum == 4.0);
    }
}

TEST_CASE("zero-coverage zone yields count 0, sum 0, undefined mean")
{
    const Grid g(2, 2, 0, 0, 1, -9999, { 1, 2, 3, 4 });
    const ZoneSet zs =
      single_zone(rect_zone(Rect(100, 100, 101, 101), "elsewhere"));
    const auto rows = zonal_stats(g, zs);
    CHECK(rows[0].stats.count == 0.0);
    CHECK(rows[0].stats.sum == 0.0);
    CHECK_FALSE(rows[0].stats.mean.has_value());
}

TEST_CASE("crs tags must be compatible")
{
    const Grid g(1, 1, 0, 0, 1, -9999, { 1.0 }, "EPSG:32631");
    const ZoneSet zs =
      single_zone(rect_zone(Rect(0, 0, 1, 1), "z"), "EPSG:4326");
    CHECK_THROWS_AS(zonal_stats(g, zs), CrsMismatch);
}

TEST_CASE("center mode equals exhaustive brute force")
{
    std::mt19937_64 rng(81);
    for (int trial = 0; trial < 30; ++trial) {
        const Grid g = testsupport::random_grid(rng, 15);
        const Rect ext = g.extent();
        const Polygon poly = testsupport::random_star_polygon(
          rng, ext.min_x + ext.width() * 0.5, ext.min_y + ext.height() * 0.5,
          ext.width() * 0.15, ext.width() * 0.6,
          4 + static_cast<int>(rng() % 8));
        const Zone zone({ poly },
                        { "z", "25020", "Lagos Island", "LA", "Lagos" });

        ZonalOptions opts;
        opts.mode = CoverageMode::Center;
        const auto rows = zonal_stats(g, single_zone(zone), opts);
        const auto brute = testsupport::brute_force_center_stats(g, zone);
        CHECK(rows[0].stats.count == brute.count);
        CHECK(rows[0].stats.sum == brute.sum);
        // Center-mode count is an integer.
        CHECK(rows[0].stats.count == std::floor(rows[0].stats.count));
    }
}

TEST_CASE("bbox prefilter does not change results")
{
    std::mt19937_64 rng(82);
    for (int trial = 0; trial < 20; ++trial) {
        const Grid g = testsupport::random_grid(rng, 12);
        const Rect ext = g.extent();
        const Polygon poly = testsupport::random_star_polygon(
          rng, ext.min_x + ext.width() * 0.4, ext.min_y + ext.height() * 0.6,
          ext.width() * 0.1, ext.width() * 0.45, 7);
        const ZoneSet zs = single_zone(
          Zone({ poly }, { "z", "25020", "Lagos Island", "LA", "Lagos" }));
        for (CoverageMode mode :
             { CoverageMode::Center, CoverageMode::Weighted }) {
            ZonalOptions fast;
            fast.mode = mode;
            fast.bbox_prefilter = true;
            ZonalOptions slow = fast;
            slow.bbox_prefilter = false;
            const auto a = zonal_stats(g, zs, fast);
            const auto b = zonal_stats(g, zs, slow);
            CHECK(a[0].stats.count == b[0].stats.count);
            CHECK(a[0].stats.sum == b[0].stats.sum);
        }
    }
}

TEST_CASE("quadrant partition conserves the grid total")
{
    std::mt19937_64 rng(83);
    std::uniform_real_distribution<double> value(0.0, 300.0);
    std::vector<double> values(50 * 50);
    for (double& v : values) {
        v = value(rng);
    }
    const Grid g(50, 50, 0, 0, 1, -9999, std::move(values));

    std::vector<Zone> quads;
    quads.push_back(rect_zone(Rect(0, 0, 25.3, 24.7), "sw"));
    quads.push_back(rect_zone(Rect(25.3, 0, 50, 24.7), "se"));
    quads.push_back(rect_zone(Rect(0, 24.7, 25.3, 50), "nw"));
    quads.push_back(rect_zone(Rect(25.3, 24.7, 50, 50), "ne"));
    const ZoneSet zs(std::move(quads));

    const auto rows = zonal_stats(g, zs);
    const double total = aggregate_total(rows);
    CHECK(std::abs(total - g.total()) <= 1e-9 * g.total());
}

TEST_CASE("monotonicity on nested rectangles")
{
    std::mt19937_64 rng(84);
    for (int trial = 0; trial < 10; ++trial) {
        const Grid g = testsupport::random_grid(rng, 12, 0.0);
        const Rect ext = g.extent();
        double prev_sum = -1.0;
        for (double f : { 0.2, 0.4, 0.6, 0.8, 1.0 }) {
            const Rect window(ext.min_x, ext.min_y,
                              ext.min_x + ext.width() * f,
                              ext.min_y + ext.height() * f);
            const auto rows =
              zonal_stats(g, single_zone(rect_zone(window, "w")));
            CHECK(rows[0].stats.sum >= prev_sum - 1e-9);
            prev_sum = rows[0].stats.sum;
        }
    }
}

TEST_CASE("overlapping zones are computed independently")
{
    const Grid g(3, 3, 0, 0, 1, -9999, { 1, 2, 3, 4, 5, 6, 7, 8, 9 });
    std::vector<Zone> zones;
    zones.push_back(rect_zone(Rect(0, 0, 2, 3), "a"));
    zones.push_back(rect_zone(Rect(1, 0, 3, 3), "b")); // overlaps column 1
    zones.push_back(rect_zone(Rect(0, 0, 2, 3), "a-again"));
    const auto rows = zonal_stats(g, ZoneSet(std::move(zones)));
    CHECK(rows[0].stats.sum == rows[2].stats.sum);
    CHECK(rows[0].stats.count == rows[2].stats.count);
    // Twin zones overlap on the middle column: their sums double-count it.
    CHECK(rows[0].stats.sum + rows[1].stats.sum > g.total());
}

TEST_CASE("mean * count equals sum")
{
    std::mt19937_64 rng(85);
    for (int trial = 0; trial < 30; ++trial) {
        const Grid g = testsupport::random_grid(rng, 12);
        const Rect ext = g.extent();
        const Polygon poly = testsupport::random_star_polygon(
          rng, ext.min_x + ext.width() * 0.5, ext.min_y + ext.height() * 0.5,
          ext.width() * 0.2, ext.width() * 0.55, 6);
        const auto rows = zonal_stats(
          g, single_zone(Zone(
               { poly }, { "z", "25020", "Lagos Island", "LA", "Lagos" })));
        if (rows[0].stats.mean) {
            CHECK(std::abs(*rows[0].stats.mean * rows[0].stats.count -
                           rows[0].stats.sum) <=
                  1e-9 * std::max(1.0, std::abs(rows[0].stats.sum)));
        }
    }
}

TEST_CASE("export_zonal_csv")
{
    std::vector<ZonalRow> rows;
    rows.push_back({ { "Ajele", "25020", "Lagos Island", "LA", "Lagos" },
                     { 8.0, 980.252693176, 980.252693176 / 8.0 } });
    rows.push_back({ { "Empty", "25020", "Lagos Island", "LA", "Lagos" },
                     { 0.0, 0.0, std::nullopt } });
    const std::string csv = export_zonal_csv(rows);

    const std::string expected_header(kZonalCsvHeader);
    CHECK(csv.substr(0, expected_header.size()) == expected_header);
    CHECK(csv.find("Ajele,25020,Lagos Island,LA,Lagos"
                   ",8,980.252693176,122.531586647\n") != std::string::npos);
    CHECK(csv.find("Empty,25020,Lagos Island,LA,Lagos,0,0,\n") !=
          std::string::npos);

    CHECK_THROWS_AS(export_zonal_csv({}), EmptyInput);
}

TEST_CASE("zonal csv round-trips bit-exactly")
{
    std::mt19937_64 rng(86);
    std::uniform_real_distribution<double> value(0.0, 5000.0);
    std::vector<ZonalRow> rows;
    for (int i = 0; i < 50; ++i) {
        ZonalRow row;
        row.attrs = { "Ward, the \"" + std::to_string(i) + "\"", "25020",
                      "Lagos Island", "LA", "Lagos" };
        row.stats.count = value(rng);
        row.stats.sum = value(rng);
        if (i % 7 != 0) {
            row.stats.mean = row.stats.sum / row.stats.count;
        } else {
            row.stats.count = 0.0;
            row.stats.sum = 0.0;
        }
        rows.push_back(std::move(row));
    }
    const auto parsed = parse_zonal_csv(export_zonal_csv(rows));
    REQUIRE(parsed.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(parsed[i].attrs.ward_name == rows[i].attrs.ward_name);
        CHECK(parsed[i].stats.count == rows[i].stats.count);
        CHECK(parsed[i].stats.sum == rows[i].stats.sum);
        CHECK(parsed[i].stats.mean == rows[i].stats.mean);
    }

    CHECK_THROWS_AS(parse_zonal_csv(std::string("ward,bad,header\n1,2,3\n")),
                    SchemaError);
}

TEST_CASE("aggregate_total")
{
    CHECK(aggregate_total({}) == 0.0);

    std::vector<ZonalRow> one;
    one.push_back({ { "w", "1", "x", "y", "z" }, { 1.0, 123.5, 123.5 } });
    CHECK(aggregate_total(one) == 123.5);

    std::vector<ZonalRow> wards;
    for (const auto& row : lagos::kWardNeeds) {
        wards.push_back({ { row.ward_name, "25020", "Lagos Island", "LA",
                            "Lagos" },
                          { 1.0, row.no_of_persons, row.no_of_persons } });
    }
    CHECK(std::abs(aggregate_total(wards) - lagos::kLgaTotal) <= 0.01);
}
