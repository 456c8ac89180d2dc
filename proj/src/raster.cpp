// Apache License, Version 2.0, refer to LICENSE.txt

#include "gridpop/raster.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "gridpop/errors.hpp"
#include "gridpop/numeric.hpp"

namespace gridpop {

namespace {

constexpr std::size_t kMaxCells = 50'000'000;

std::string lowercase(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return s;
}

std::vector<std::string> split_ws(const std::string& line)
{
    std::vector<std::string> tokens;
    std::istringstream iss(line);
    std::string tok;
    while (iss >> tok) {
        tokens.push_back(tok);
    }
    return tokens;
}

} // namespace

Grid::Grid(std::size_t ncols,
           std::size_t nrows,
           double xll,
           double yll,
           double cellsize,
           double nodata,
           std::vector<double> values,
           std::string crs_tag)
  : ncols_(ncols)
  , nrows_(nrows)
  , xll_(xll)
  , yll_(yll)
  , cellsize_(cellsize)
  , nodata_(nodata)
  , values_(std::move(values))
  , crs_tag_(std::move(crs_tag))
{
    if (ncols_ == 0 || nrows_ == 0) {
        throw std::invalid_argument("grid dimensions must be positive");
    }
    if (!std::isfinite(xll_) || !std::isfinite(yll_)) {
        throw std::invalid_argument("grid origin must be finite");
    }
    if (!std::isfinite(cellsize_) || cellsize_ <= 0.0) {
        throw std::invalid_argument("cellsize must be positive");
    }
    if (!std::isfinite(nodata_) || nodata_ >= 0.0) {
        throw std::invalid_argument(
          "nodata sentinel must be a finite negative number");
    }
    if (values_.size() != ncols_ * nrows_) {
        throw std::invalid_argument("grid needs ncols * nrows values");
    }
    for (double v : values_) {
        if (v == nodata_) {
            continue;
        }
        if (!std::isfinite(v) || v < 0.0) {
            throw std::invalid_argument(
              "grid values must be non-negative or the nodata sentinel");
        }
    }
}

void Grid::check_bounds(CellIndex c) const
{
    if (c.row >= nrows_ || c.col >= ncols_) {
        throw OutOfBounds("cell (" + std::to_string(c.row) + "," +
                          std::to_string(c.col) + ") outside " +
                          std::to_string(nrows_) + "x" +
                          std::to_string(ncols_) + " grid");
    }
}

double Grid::value_at(CellIndex c) const
{
    check_bounds(c);
    return values_[c.row * ncols_ + c.col];
}

Rect Grid::cell_rect(CellIndex c) const
{
    check_bounds(c);
    const double min_x = xll_ + static_cast<double>(c.col) * cellsize_;
    const double max_y =
      yll_ + static_cast<double>(nrows_ - c.row) * cellsize_;
    return Rect(min_x, max_y - cellsize_, min_x + cellsize_, max_y);
}

Point Grid::cell_center(CellIndex c) const
{
    const Rect r = cell_rect(c);
    return Point(0.5 * (r.min_x + r.max_x), 0.5 * (r.min_y + r.max_y));
}

Rect Grid::extent() const
{
    return Rect(xll_, yll_, xll_ + static_cast<double>(ncols_) * cellsize_,
                yll_ + static_cast<double>(nrows_) * cellsize_);
}

double Grid::total() const
{
    KahanSum sum;
    for (double v : values_) {
        if (!is_nodata(v)) {
            sum.add(v);
        }
    }
    return sum.value();
}

Grid read_ascii_grid(std::istream& in, std::string crs_tag)
{
    static const char* kKeys[] = { "ncols",     "nrows",    "xllcorner",
                                   "yllcorner", "cellsize", "nodata_value" };

    std::map<std::string, std::pair<std::string, std::size_t>> header;
    std::string line;
    std::size_t line_no = 0;

    // Header: the first six non-blank lines.
    while (header.size() < 6 && std::getline(in, line)) {
        ++line_no;
        const auto tokens = split_ws(line);
        if (tokens.empty()) {
            continue;
        }
        if (tokens.size() != 2) {
            throw MalformedHeader("line " + std::to_string(line_no) +
                                  ": header line needs a key and a value");
        }
        const std::string key = lowercase(tokens[0]);
        if (key == "xllcenter" || key == "yllcenter") {
            throw MalformedHeader("line " + std::to_string(line_no) + ": " +
                                  tokens[0] +
                                  " is not supported; use corner referencing");
        }
        if (std::find(std::begin(kKeys), std::end(kKeys), key) ==
            std::end(kKeys)) {
            throw MalformedHeader("line " + std::to_string(line_no) +
                                  ": unknown header key '" + tokens[0] + "'");
        }
        if (header.count(key) != 0) {
            throw MalformedHeader("line " + std::to_string(line_no) +
                                  ": duplicate header key '" + tokens[0] +
                                  "'");
        }
        header[key] = { tokens[1], line_no };
    }
    for (const char* key : kKeys) {
        if (header.count(key) == 0) {
            throw MalformedHeader(std::string("missing header key '") + key +
                                  "'");
        }
    }

    const auto header_count = [&](const char* key) -> std::size_t {
        const auto& [text, at_line] = header[key];
        const auto parsed = parse_double(text);
        if (!parsed || *parsed <= 0.0 || *parsed != std::floor(*parsed)) {
            throw MalformedHeader("line " + std::to_string(at_line) + ": " +
                                  key + " must be a positive integer, got '" +
                                  text + "'");
        }
        return static_cast<std::size_t>(*parsed);
    };
    const auto header_num = [&](const char* key) -> double {
        const auto& [text, at_line] = header[key];
        const auto parsed = parse_double(text);
        if (!parsed || !std::isfinite(*parsed)) {
            throw MalformedHeader("line " + std::to_string(at_line) + ": " +
                                  key + " must be a finite number, got '" +
                                  text + "'");
        }
        return *parsed;
    };

    const std::size_t ncols = header_count("ncols");
    const std::size_t nrows = header_count("nrows");
    if (ncols > kMaxCells / nrows) {
        throw MalformedHeader("grid of " + std::to_string(nrows) + "x" +
                              std::to_string(ncols) + " cells is too large");
    }
    const double xll = header_num("xllcorner");
    const double yll = header_num("yllcorner");
    const double cellsize = header_num("cellsize");
    if (cellsize <= 0.0) {
        throw MalformedHeader("cellsize must be positive");
    }
    const double nodata = header_num("nodata_value");

    const std::size_t expected = ncols * nrows;
    std::vector<double> values;
    values.reserve(expected);
    while (std::getline(in, line)) {
        ++line_no;
        for (const std::string& tok : split_ws(line)) {
            if (values.size() == expected) {
                throw TokenCountMismatch(
                  "line " + std::to_string(line_no) + ": expected " +
                  std::to_string(expected) +
                  " data values but found more (first extra token '" + tok +
                  "')");
            }
            const auto parsed = parse_double(tok);
            if (!parsed) {
                throw NonNumericToken("line " + std::to_string(line_no) +
                                      ": token '" + tok +
                                      "' is not a number");
            }
            if (!std::isfinite(*parsed)) {
                throw NonNumericToken("line " + std::to_string(line_no) +
                                      ": token '" + tok +
                                      "' is not a finite number");
            }
            values.push_back(*parsed);
        }
    }
    if (values.size() != expected) {
        throw TokenCountMismatch(
          "expected " + std::to_string(expected) + " data values, found " +
          std::to_string(values.size()) + " (data ended at line " +
          std::to_string(line_no) + ")");
    }

    try {
        return Grid(ncols, nrows, xll, yll, cellsize, nodata,
                    std::move(values), std::move(crs_tag));
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("invalid grid: ") + e.what());
    }
}

Grid read_ascii_grid_file(const std::filesystem::path& path,
                          std::string crs_tag)
{
    std::ifstream in(path);
    if (!in) {
        throw IoFailure("cannot open raster file: " + path.string());
    }
    return read_ascii_grid(in, std::move(crs_tag));
}

std::string write_ascii_grid(const Grid& g)
{
    std::string out;
    out.reserve(g.values().size() * 8 + 128);
    out += "ncols " + std::to_string(g.ncols()) + "\n";
    out += "nrows " + std::to_string(g.nrows()) + "\n";
    out += "xllcorner " + format_double(g.xll()) + "\n";
    out += "yllcorner " + format_double(g.yll()) + "\n";
    out += "cellsize " + format_double(g.cellsize()) + "\n";
    out += "nodata_value " + format_double(g.nodata()) + "\n";
    for (std::size_t row = 0; row < g.nrows(); ++row) {
        for (std::size_t col = 0; col < g.ncols(); ++col) {
            if (col > 0) {
                out += ' ';
            }
            out += format_double(g.values()[row * g.ncols() + col]);
        }
        out += '\n';
    }
    return out;
}

void write_ascii_grid_file(const Grid& g, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) {
        throw IoFailure("cannot open output file: " + path.string());
    }
    out << write_ascii_grid(g);
    if (!out) {
        throw IoFailure("failed writing raster to " + path.string());
    }
}

Grid clip_by_mask(const Grid& g,
                  const std::vector<Polygon>& mask,
                  CoverageMode mode,
                  double threshold)
{
    if (!(threshold > 0.0) || threshold > 1.0) {
        throw std::invalid_argument("threshold must be in (0, 1]");
    }
    std::vector<Rect> part_boxes;
    part_boxes.reserve(mask.size());
    for (const Polygon& p : mask) {
        part_boxes.push_back(p.bounding_box());
    }

    std::vector<double> out(g.values().size(), g.nodata());
    for (std::size_t row = 0; row < g.nrows(); ++row) {
        for (std::size_t col = 0; col < g.ncols(); ++col) {
            const CellIndex c{ row, col };
            const double v = g.values()[row * g.ncols() + col];
            bool keep = false;
            if (mode == CoverageMode::Center) {
                const Point center = g.cell_center(c);
                for (std::size_t i = 0; i < mask.size(); ++i) {
                    if (part_boxes[i].contains(center) &&
                        point_in_polygon(center, mask[i])) {
                        keep = true;
                        break;
                    }
                }
            } else {
                const Rect cell = g.cell_rect(c);
                double frac = 0.0;
                for (std::size_t i = 0; i < mask.size(); ++i) {
                    if (part_boxes[i].intersects(cell)) {
                        frac += coverage_fraction(mask[i], cell);
                    }
                }
                keep = frac >= threshold;
            }
            if (keep) {
                out[row * g.ncols() + col] = v;
            }
        }
    }
    return Grid(g.ncols(), g.nrows(), g.xll(), g.yll(), g.cellsize(),
                g.nodata(), std::move(out), g.crs_tag());
}

Grid clip_by_mask(const Grid& g,
                  const Polygon& mask,
                  CoverageMode mode,
                  double threshold)
{
    return clip_by_mask(g, std::vector<Polygon>{ mask }, mode, threshold);
}

std::vector<std::pair<Point, double>> raster_to_points(const Grid& g)
{
    std::vector<std::pair<Point, double>> points;
    for (std::size_t row = 0; row < g.nrows(); ++row) {
        for (std::size_t col = 0; col < g.ncols(); ++col) {
            const double v = g.values()[row * g.ncols() + col];
            if (!g.is_nodata(v)) {
                points.emplace_back(g.cell_center({ row, col }), v);
            }
        }
    }
    return points;
}

} // namespace gridpop
