// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef GRIDPOP_ZONES_HPP
#define GRIDPOP_ZONES_HPP

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "gridpop/geometry.hpp"

namespace gridpop {

/// Ward attribute record carried through to the zonal CSV.
struct ZoneAttributes {
    std::string ward_name;
    std::string lga_code;
    std::string lga_name;
    std::string state_code;
    std::string state_name;
};

/// An administrative zone: one or more polygon parts (parts are assumed
/// disjoint) plus its attribute record.
class Zone {
  public:
    Zone(std::vector<Polygon> parts, ZoneAttributes attrs);

    const std::vector<Polygon>& parts() const { return parts_; }
    const ZoneAttributes& attrs() const { return attrs_; }
    const Rect& bounding_box() const { return bbox_; }

    /// True when the point is inside any part (boundary points included).
    bool contains(const Point& p) const;

    /// Summed coverage over parts, snapped to exact 0/1 within 1e-12.
    double coverage_fraction(const Rect& cell) const;

  private:
    std::vector<Polygon> parts_;
    std::vector<Rect> part_boxes_;
    ZoneAttributes attrs_;
    Rect bbox_;
};

/// Ordered zone collection; zone order is the input order and is preserved
/// through every downstream operation. crs_tag follows the same convention
/// as Grid: empty means unspecified and matches anything.
class ZoneSet {
  public:
    explicit ZoneSet(std::vector<Zone> zones, std::string crs_tag = "");

    const std::vector<Zone>& zones() const { return zones_; }
    const std::string& crs_tag() const { return crs_tag_; }

  private:
    std::vector<Zone> zones_;
    std::string crs_tag_;
};

/// True when the tags are equal or either side is unspecified.
bool crs_compatible(const std::string& a, const std::string& b);

/// Loads a GeoJSON FeatureCollection of Polygon/MultiPolygon features. Each
/// feature must carry ward_name, lga_code, lga_name, state_code, state_name
/// properties (numbers are coerced to their decimal text). A top-level
/// legacy "crs" member, when present, supplies the CRS tag.
ZoneSet read_geojson_zones(std::istream& in);
ZoneSet read_geojson_zones(const std::string& text);
ZoneSet read_geojson_zones_file(const std::filesystem::path& path);

std::vector<Polygon> all_parts(const ZoneSet& zs);

} // namespace gridpop

#endif // GRIDPOP_ZONES_HPP
