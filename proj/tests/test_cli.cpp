// Apache License, Version 2.0, refer to LICENSE.txt

// End-to-end tests that drive the built binary through std::system.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "doctest.h"
#include "gridpop/raster.hpp"
#include "gridpop/services.hpp"
#include "gridpop/zonal.hpp"
#include "lagos_fixture.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kBin = GRIDPOP_BIN_PATH;
const std::string kFixtures = GRIDPOP_FIXTURES_DIR;

struct RunResult {
    int exit_code;
    std::string output;
};

fs::path make_temp_dir()
{
    std::string tmpl =
      (fs::temp_directory_path() / "gridpop_test_XXXXXX").string();
    char* made = mkdtemp(tmpl.data());
    REQUIRE(made != nullptr);
    return fs::path(made);
}

RunResult run(const std::string& args, const fs::path& dir)
{
    const fs::path log = dir / "cmd_output.txt";
    const std::string cmd =
      "\"" + kBin + "\" " + args + " > \"" + log.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(log);
    std::stringstream ss;
    ss << in.rdbuf();
    result.output = ss.str();
    return result;
}

std::string slurp(const fs::path& path)
{
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t count_substr(const std::string& text, const std::string& what)
{
    std::size_t n = 0;
    std::size_t pos = 0;
    while ((pos = text.find(what, pos)) != std::string::npos) {
        ++n;
        pos += what.size();
    }
    return n;
}

} // namespace

TEST_CASE("zonal pipeline on the demo fixtures")
{
    const fs::path dir = make_temp_dir();
    const auto result = run("zonal --raster " + kFixtures +
                              "/demo_grid.asc --zones " + kFixtures +
                              "/demo_wards.geojson --mode weighted --out " +
                              (dir / "out").string(),
                            dir);
    REQUIRE(result.exit_code == 0);

    const auto rows =
      gridpop::parse_zonal_csv(slurp(dir / "out" / "zonal.csv"));
    REQUIRE(rows.size() == 4);
    for (const auto& row : rows) {
        if (row.stats.mean) {
            CHECK(std::abs(*row.stats.mean * row.stats.count -
                           row.stats.sum) <= 1e-9 * row.stats.sum);
        }
    }

    // The four demo wards tile the grid extent, so their sums are a
    // partition of the grid total.
    const gridpop::Grid grid =
      gridpop::read_ascii_grid_file(kFixtures + "/demo_grid.asc");
    CHECK(std::abs(gridpop::aggregate_total(rows) - grid.total()) <=
          1e-9 * grid.total());

    SUBCASE("manifest replay reproduces outputs byte for byte")
    {
        const auto replay =
          run("zonal --manifest " + (dir / "out" / "manifest.json").string() +
                " --out " + (dir / "replay").string(),
              dir);
        REQUIRE(replay.exit_code == 0);
        CHECK(slurp(dir / "replay" / "zonal.csv") ==
              slurp(dir / "out" / "zonal.csv"));
        CHECK(slurp(dir / "replay" / "manifest.json") ==
              slurp(dir / "out" / "manifest.json"));
    }

    SUBCASE("pre-clipping to the zones never grows a ward total")
    {
        const auto clipped =
          run("zonal --raster " + kFixtures + "/demo_grid.asc --zones " +
                kFixtures + "/demo_wards.geojson --mode weighted "
                "--clip-to-zones --out " +
                (dir / "clipped").string(),
              dir);
        REQUIRE(clipped.exit_code == 0);
        const auto clipped_rows =
          gridpop::parse_zonal_csv(slurp(dir / "clipped" / "zonal.csv"));
        REQUIRE(clipped_rows.size() == rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            CHECK(clipped_rows[i].stats.sum <= rows[i].stats.sum + 1e-9);
        }
    }
    fs::remove_all(dir);
}

TEST_CASE("zonal over one full-extent zone conserves the grid total")
{
    const fs::path dir = make_temp_dir();
    const auto result = run("zonal --raster " + kFixtures +
                              "/demo_grid.asc --zones " + kFixtures +
                              "/demo_full_extent.geojson --out " +
                              (dir / "out").string(),
                            dir);
    REQUIRE(result.exit_code == 0);
    const auto rows =
      gridpop::parse_zonal_csv(slurp(dir / "out" / "zonal.csv"));
    REQUIRE(rows.size() == 1);
    const gridpop::Grid grid =
      gridpop::read_ascii_grid_file(kFixtures + "/demo_grid.asc");
    CHECK(rows[0].stats.sum == doctest::Approx(grid.total()).epsilon(1e-12));
    fs::remove_all(dir);
}

TEST_CASE("missing raster maps to IoFailure with exit 2")
{
    const fs::path dir = make_temp_dir();
    const auto result = run("zonal --raster /nonexistent/file.asc --zones " +
                              kFixtures + "/demo_wards.geojson --out " +
                              (dir / "out").string(),
                            dir);
    CHECK(result.exit_code == 2);
    CHECK(result.output.find("IoFailure") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("crs mismatch is reported as CrsMismatch")
{
    const fs::path dir = make_temp_dir();
    // demo_wards.geojson declares EPSG:32631.
    const auto result = run("zonal --raster " + kFixtures +
                              "/demo_grid.asc --zones " + kFixtures +
                              "/demo_wards.geojson --crs EPSG:4326 --out " +
                              (dir / "out").string(),
                            dir);
    CHECK(result.exit_code == 2);
    CHECK(result.output.find("CrsMismatch") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("needs reproduces the ward table and renders a chart")
{
    const fs::path dir = make_temp_dir();
    const auto result = run("needs --in " + kFixtures +
                              "/lagos_island_zonal.csv --chart --out " +
                              (dir / "out").string(),
                            dir);
    REQUIRE(result.exit_code == 0);

    const auto rows =
      gridpop::parse_needs_csv(slurp(dir / "out" / "needs.csv"));
    REQUIRE(rows.size() == lagos::kWardNeeds.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].ward_name == lagos::kWardNeeds[i].ward_name);
        CHECK(rows[i].toilets_need == lagos::kWardNeeds[i].toilets_need);
        CHECK(rows[i].male_units == lagos::kWardNeeds[i].male_units);
        CHECK(rows[i].female_units == lagos::kWardNeeds[i].female_units);
    }

    const std::string note = slurp(dir / "out" / "needs_manifest.txt");
    CHECK(note.find("water closets only") != std::string::npos);

    const std::string svg = slurp(dir / "out" / "needs_chart.svg");
    CHECK(count_substr(svg, "<rect ") == lagos::kWardNeeds.size());
    fs::remove_all(dir);
}

TEST_CASE("needs rejects a CSV without the zonal schema")
{
    const fs::path dir = make_temp_dir();
    const fs::path bad = dir / "bad.csv";
    std::ofstream(bad) << "ward_name,lga_code,lga_name,state_code,"
                          "state_name,_count,_mean\nw,1,x,y,z,1,1\n";
    const auto result =
      run("needs --in " + bad.string() + " --out " + (dir / "out").string(),
          dir);
    CHECK(result.exit_code == 2);
    CHECK(result.output.find("ParseError") != std::string::npos);
    CHECK(result.output.find("header") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("chart command renders one bar per ward")
{
    const fs::path dir = make_temp_dir();
    const auto result = run("chart --in " + kFixtures +
                              "/lagos_island_zonal.csv --out " +
                              (dir / "out").string(),
                            dir);
    REQUIRE(result.exit_code == 0);
    const std::string svg = slurp(dir / "out" / "chart.svg");
    CHECK(count_substr(svg, "<rect ") == 20);
    CHECK(svg.find("Ward population estimates") != std::string::npos);

    SUBCASE("needs CSVs chart their need column by default")
    {
        REQUIRE(run("needs --in " + kFixtures +
                      "/lagos_island_zonal.csv --out " +
                      (dir / "needs").string(),
                    dir)
                  .exit_code == 0);
        const auto chart =
          run("chart --in " + (dir / "needs" / "needs.csv").string() +
                " --out " + (dir / "needs_chart").string(),
              dir);
        REQUIRE(chart.exit_code == 0);
        const std::string needs_svg =
          slurp(dir / "needs_chart" / "chart.svg");
        CHECK(count_substr(needs_svg, "<rect ") == 20);
        CHECK(needs_svg.find("Estimated toilet need per ward") !=
              std::string::npos);
    }
    fs::remove_all(dir);
}

TEST_CASE("simulate is reproducible from the seed")
{
    const fs::path dir = make_temp_dir();
    const std::string args =
      "simulate --locations 60 --types 2 --regions 2 --covariates 3 "
      "--alpha0 4.6 --beta 0.5,-0.3,0.2 --sigma 0.3 --seed 42 --out ";
    REQUIRE(run(args + (dir / "a").string(), dir).exit_code == 0);
    REQUIRE(run(args + (dir / "b").string(), dir).exit_code == 0);
    CHECK(slurp(dir / "a" / "microcensus.csv") ==
          slurp(dir / "b" / "microcensus.csv"));
    CHECK(slurp(dir / "a" / "manifest.json") ==
          slurp(dir / "b" / "manifest.json"));
    fs::remove_all(dir);
}

TEST_CASE("simulate, fit, predict round trip")
{
    const fs::path dir = make_temp_dir();
    REQUIRE(run("simulate --locations 80 --covariates 1 --alpha0 4.2 "
                "--beta 0.4 --sigma 0.3 --seed 7 --out " +
                  (dir / "sim").string(),
                dir)
              .exit_code == 0);

    const auto fit_result =
      run("fit --data " + (dir / "sim" / "microcensus.csv").string() +
            " --draws 300 --burn-in 300 --seed 11 --out " +
            (dir / "fit").string(),
          dir);
    REQUIRE(fit_result.exit_code == 0);

    const std::string manifest = slurp(dir / "fit" / "manifest.json");
    const auto accept_pos = manifest.find("acceptance_rate");
    REQUIRE(accept_pos != std::string::npos);
    const double rate =
      std::stod(manifest.substr(manifest.find(':', accept_pos) + 1));
    CHECK(rate > 0.0);
    CHECK(rate < 1.0);

    const auto predict_result =
      run("predict --chain " + (dir / "fit" / "chain.csv").string() +
            " --data " + (dir / "sim" / "microcensus.csv").string() +
            " --q 0.95 --seed 3 --out " + (dir / "pred").string(),
          dir);
    REQUIRE(predict_result.exit_code == 0);

    std::istringstream pred_csv(slurp(dir / "pred" / "predictions.csv"));
    std::string line;
    std::getline(pred_csv, line);
    CHECK(line == "loc_id,mean,lo,hi");
    int rows = 0;
    while (std::getline(pred_csv, line)) {
        std::istringstream fields(line);
        std::string loc_id, mean_s, lo_s, hi_s;
        std::getline(fields, loc_id, ',');
        std::getline(fields, mean_s, ',');
        std::getline(fields, lo_s, ',');
        std::getline(fields, hi_s, ',');
        const double mean = std::stod(mean_s);
        const double lo = std::stod(lo_s);
        const double hi = std::stod(hi_s);
        CHECK(lo <= mean);
        CHECK(mean <= hi);
        ++rows;
    }
    CHECK(rows == 80);
    fs::remove_all(dir);
}

TEST_CASE("clip writes a grid that reloads cleanly")
{
    const fs::path dir = make_temp_dir();
    const auto result = run("clip --raster " + kFixtures +
                              "/demo_grid.asc --zones " + kFixtures +
                              "/demo_wards.geojson --mode center --out " +
                              (dir / "out").string(),
                            dir);
    REQUIRE(result.exit_code == 0);
    const gridpop::Grid clipped =
      gridpop::read_ascii_grid_file(dir / "out" / "clipped.asc");
    const gridpop::Grid original =
      gridpop::read_ascii_grid_file(kFixtures + "/demo_grid.asc");
    CHECK(clipped.ncols() == original.ncols());
    CHECK(clipped.total() <= original.total());
    fs::remove_all(dir);
}
