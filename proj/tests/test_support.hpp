// Apache License, Version 2.0, refer to LICENSE.txt

// Shared generators and independent oracles for the test suites. Everything
// here is deliberately brute force: oracles must not share code paths with
// the implementations they check.

#ifndef GRIDPOP_TESTS_TEST_SUPPORT_HPP
#define GRIDPOP_TESTS_TEST_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "gridpop/geometry.hpp"
#include "gridpop/raster.hpp"
#include "gridpop/zones.hpp"

namespace testsupport {

// Star-shaped polygon around a center: vertices at increasing angles with
// random radii. Every angular gap (including the wrap-around) stays below
// pi, which guarantees the polygon is simple.
inline gridpop::Polygon random_star_polygon(std::mt19937_64& rng,
                                            double cx,
                                            double cy,
                                            double r_min,
                                            double r_max,
                                            int n_vertices)
{
    std::uniform_real_distribution<double> gap_dist(0.6, 1.0);
    std::uniform_real_distribution<double> radius_dist(r_min, r_max);
    std::uniform_real_distribution<double> phase_dist(0.0, 2.0 * M_PI);
    std::vector<double> gaps(static_cast<std::size_t>(n_vertices));
    double gap_total = 0.0;
    for (double& g : gaps) {
        g = gap_dist(rng);
        gap_total += g;
    }
    const double phase = phase_dist(rng);
    std::vector<gridpop::Point> pts;
    pts.reserve(gaps.size());
    double angle = phase;
    for (double g : gaps) {
        angle += g * 2.0 * M_PI / gap_total;
        const double r = radius_dist(rng);
        pts.emplace_back(cx + r * std::cos(angle), cy + r * std::sin(angle));
    }
    return gridpop::Polygon(gridpop::Ring(std::move(pts)));
}

inline gridpop::Grid random_grid(std::mt19937_64& rng,
                                 std::size_t max_dim,
                                 double nodata_prob = 0.15)
{
    std::uniform_int_distribution<std::size_t> dim_dist(1, max_dim);
    std::uniform_real_distribution<double> value_dist(0.0, 500.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> origin_dist(-1000.0, 1000.0);
    const std::size_t ncols = dim_dist(rng);
    const std::size_t nrows = dim_dist(rng);
    const double cellsize =
      std::uniform_real_distribution<double>(0.5, 150.0)(rng);
    std::vector<double> values(ncols * nrows);
    for (double& v : values) {
        v = unit(rng) < nodata_prob ? -9999.0 : value_dist(rng);
    }
    return gridpop::Grid(ncols, nrows, origin_dist(rng), origin_dist(rng),
                         cellsize, -9999.0, std::move(values));
}

// Coverage fraction by dense stratified point sampling: one jittered sample
// per subcell, tested with point_in_polygon. A plain midpoint lattice is
// biased when an edge aligns with a sampling row; the jittered estimate is
// unbiased. Slow and independent of the clipping code.
inline double supersampled_coverage(const gridpop::Polygon& poly,
                                    const gridpop::Rect& cell,
                                    int s = 200,
                                    std::uint64_t seed = 987654321)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double dx = cell.width() / s;
    const double dy = cell.height() / s;
    long inside = 0;
    for (int iy = 0; iy < s; ++iy) {
        for (int ix = 0; ix < s; ++ix) {
            const double x = cell.min_x + (ix + unit(rng)) * dx;
            const double y = cell.min_y + (iy + unit(rng)) * dy;
            if (gridpop::point_in_polygon(gridpop::Point(x, y), poly)) {
                ++inside;
            }
        }
    }
    return static_cast<double>(inside) /
           (static_cast<double>(s) * static_cast<double>(s));
}

struct BruteStats {
    double count = 0.0;
    double sum = 0.0;
};

// Center-mode zonal statistics by exhaustive point-in-polygon over every
// cell, compensated in the same row-major order the contract fixes.
inline BruteStats brute_force_center_stats(const gridpop::Grid& g,
                                           const gridpop::Zone& zone)
{
    double count = 0.0, count_c = 0.0;
    double sum = 0.0, sum_c = 0.0;
    const auto kahan_add = [](double& total, double& comp, double x) {
        const double y = x - comp;
        const double t = total + y;
        comp = (t - total) - y;
        total = t;
    };
    for (std::size_t row = 0; row < g.nrows(); ++row) {
        for (std::size_t col = 0; col < g.ncols(); ++col) {
            const double v = g.values()[row * g.ncols() + col];
            if (g.is_nodata(v)) {
                continue;
            }
            const gridpop::Point center = g.cell_center({ row, col });
            bool inside = false;
            for (const gridpop::Polygon& part : zone.parts()) {
                if (gridpop::point_in_polygon(center, part)) {
                    inside = true;
                    break;
                }
            }
            if (inside) {
                kahan_add(count, count_c, 1.0);
                kahan_add(sum, sum_c, v);
            }
        }
    }
    return { count, sum };
}

inline gridpop::Zone rect_zone(const gridpop::Rect& r, const char* name)
{
    return gridpop::Zone({ gridpop::polygon_from_rect(r) },
                         { name, "25020", "Lagos Island", "LA", "Lagos" });
}

} // namespace testsupport

#endif // GRIDPOP_TESTS_TEST_SUPPORT_HPP
