// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef GRIDPOP_RASTER_HPP
#define GRIDPOP_RASTER_HPP

#include <cstddef>
#include <filesystem>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "gridpop/geometry.hpp"

namespace gridpop {

struct CellIndex {
    std::size_t row; // 0-based from north
    std::size_t col; // 0-based from west
};

/// A georeferenced grid of population values over square cells. Values are
/// stored row-major with the northernmost row first. Non-nodata values are
/// finite and non-negative; the nodata sentinel must be a finite negative
/// number so it can never collide with a valid population value.
///
/// The ASCII interchange format carries no CRS, so crs_tag is an opaque
/// string assigned by the caller (empty means unspecified and is compatible
/// with any tag).
class Grid {
  public:
    Grid(std::size_t ncols,
         std::size_t nrows,
         double xll,
         double yll,
         double cellsize,
         double nodata,
         std::vector<double> values,
         std::string crs_tag = "");

    std::size_t ncols() const { return ncols_; }
    std::size_t nrows() const { return nrows_; }
    double xll() const { return xll_; }
    double yll() const { return yll_; }
    double cellsize() const { return cellsize_; }
    double nodata() const { return nodata_; }
    const std::string& crs_tag() const { return crs_tag_; }
    const std::vector<double>& values() const { return values_; }

    bool is_nodata(double v) const { return v == nodata_; }

    double value_at(CellIndex c) const;

    /// Footprint of a cell: x grows east from xll, y shrinks south from the
    /// top edge yll + nrows * cellsize.
    Rect cell_rect(CellIndex c) const;

    Point cell_center(CellIndex c) const;

    /// Full extent of the grid.
    Rect extent() const;

    /// Sum of all non-nodata values (compensated, row-major order).
    double total() const;

  private:
    void check_bounds(CellIndex c) const;

    std::size_t ncols_;
    std::size_t nrows_;
    double xll_;
    double yll_;
    double cellsize_;
    double nodata_;
    std::vector<double> values_;
    std::string crs_tag_;
};

/// Parses the ESRI ASCII grid layout: six header lines (ncols, nrows,
/// xllcorner, yllcorner, cellsize, NODATA_value; keys case-insensitive, any
/// order) followed by nrows lines of ncols numbers, north row first. The
/// xllcenter/yllcenter variant is rejected. Errors name the offending line.
Grid read_ascii_grid(std::istream& in, std::string crs_tag = "");
Grid read_ascii_grid_file(const std::filesystem::path& path,
                          std::string crs_tag = "");

/// Emits the canonical form: lowercase keys in the order above, one data row
/// per line, every number in shortest round-trip decimal form. Reading the
/// result back reproduces the grid bit for bit.
std::string write_ascii_grid(const Grid& g);
void write_ascii_grid_file(const Grid& g, const std::filesystem::path& path);

/// Cell selection rule used by clip-by-mask and zonal statistics.
enum class CoverageMode {
    Center,   // a cell belongs to the mask iff its center is inside
    Weighted, // exact area coverage fraction
};

/// Nulls every cell outside the mask: in Center mode a cell survives iff its
/// center lies inside any mask polygon; in Weighted mode iff its coverage
/// fraction is >= threshold. Retained cells keep their exact value.
Grid clip_by_mask(const Grid& g,
                  const std::vector<Polygon>& mask,
                  CoverageMode mode,
                  double threshold = 0.5);
Grid clip_by_mask(const Grid& g,
                  const Polygon& mask,
                  CoverageMode mode,
                  double threshold = 0.5);

/// One (cell center, value) pair per non-nodata cell, row-major north-first.
std::vector<std::pair<Point, double>> raster_to_points(const Grid& g);

} // namespace gridpop

#endif // GRIDPOP_RASTER_HPP
