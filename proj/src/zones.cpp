// Apache License, Version 2.0, refer to LICENSE.txt

#include "gridpop/zones.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "gridpop/errors.hpp"
#include "gridpop/numeric.hpp"

namespace gridpop {

namespace {

Rect union_rect(const std::vector<Rect>& boxes)
{
    Rect out = boxes.front();
    for (const Rect& b : boxes) {
        out = Rect(std::min(out.min_x, b.min_x), std::min(out.min_y, b.min_y),
                   std::max(out.max_x, b.max_x), std::max(out.max_y, b.max_y));
    }
    return out;
}

using json = nlohmann::json;

Ring ring_from_coords(const json& coords, std::size_t feature_idx)
{
    if (!coords.is_array() || coords.size() < 3) {
        throw ParseError("feature " + std::to_string(feature_idx) +
                         ": ring needs at least 3 positions");
    }
    std::vector<Point> pts;
    pts.reserve(coords.size());
    for (const auto& pos : coords) {
        if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() ||
            !pos[1].is_number()) {
            throw ParseError("feature " + std::to_string(feature_idx) +
                             ": position must be a [x, y] number pair");
        }
        pts.emplace_back(pos[0].get<double>(), pos[1].get<double>());
    }
    try {
        // Ring strips the closing duplicate GeoJSON requires.
        return Ring(std::move(pts));
    } catch (const std::invalid_argument& e) {
        throw ParseError("feature " + std::to_string(feature_idx) +
                         ": invalid ring: " + e.what());
    }
}

Polygon polygon_from_coords(const json& coords, std::size_t feature_idx)
{
    if (!coords.is_array() || coords.empty()) {
        throw ParseError("feature " + std::to_string(feature_idx) +
                         ": polygon needs at least one ring");
    }
    Ring exterior = ring_from_coords(coords[0], feature_idx);
    std::vector<Ring> holes;
    for (std::size_t i = 1; i < coords.size(); ++i) {
        holes.push_back(ring_from_coords(coords[i], feature_idx));
    }
    try {
        return Polygon(std::move(exterior), std::move(holes));
    } catch (const std::invalid_argument& e) {
        throw ParseError("feature " + std::to_string(feature_idx) +
                         ": invalid polygon: " + e.what());
    }
}

std::string property_text(const json& props,
                          const char* name,
                          std::size_t feature_idx)
{
    if (!props.contains(name) || props[name].is_null()) {
        throw SchemaError("feature " + std::to_string(feature_idx) +
                          ": missing property '" + name + "'");
    }
    const json& v = props[name];
    if (v.is_string()) {
        return v.get<std::string>();
    }
    if (v.is_number_integer()) {
        return std::to_string(v.get<long long>());
    }
    if (v.is_number()) {
        return format_double(v.get<double>());
    }
    throw SchemaError("feature " + std::to_string(feature_idx) +
                      ": property '" + name + "' must be text or a number");
}

} // namespace

Zone::Zone(std::vector<Polygon> parts, ZoneAttributes attrs)
  : parts_(std::move(parts))
  , attrs_(std::move(attrs))
  , bbox_(0, 0, 1, 1)
{
    if (parts_.empty()) {
        throw std::invalid_argument("zone needs at least one polygon part");
    }
    if (attrs_.ward_name.empty()) {
        throw std::invalid_argument("zone ward_name must be non-empty");
    }
    part_boxes_.reserve(parts_.size());
    for (const Polygon& p : parts_) {
        part_boxes_.push_back(p.bounding_box());
    }
    bbox_ = union_rect(part_boxes_);
}

bool Zone::contains(const Point& p) const
{
    if (!bbox_.contains(p)) {
        return false;
    }
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (part_boxes_[i].contains(p) && point_in_polygon(p, parts_[i])) {
            return true;
        }
    }
    return false;
}

double Zone::coverage_fraction(const Rect& cell) const
{
    if (!bbox_.intersects(cell)) {
        return 0.0;
    }
    double frac = 0.0;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (part_boxes_[i].intersects(cell)) {
            frac += gridpop::coverage_fraction(parts_[i], cell);
        }
    }
    if (frac >= 1.0 - 1e-12) {
        frac = 1.0;
    } else if (frac <= 1e-12) {
        frac = 0.0;
    }
    return frac;
}

ZoneSet::ZoneSet(std::vector<Zone> zones, std::string crs_tag)
  : zones_(std::move(zones))
  , crs_tag_(std::move(crs_tag))
{
}

bool crs_compatible(const std::string& a, const std::string& b)
{
    return a.empty() || b.empty() || a == b;
}

ZoneSet read_geojson_zones(std::istream& in)
{
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("geojson parse error: ") + e.what());
    }
    if (!root.is_object() || root.value("type", "") != "FeatureCollection") {
        throw ParseError("geojson root must be a FeatureCollection");
    }

    std::string crs_tag;
    if (root.contains("crs")) {
        const json& crs = root["crs"];
        if (crs.is_string()) {
            crs_tag = crs.get<std::string>();
        } else if (crs.is_object() && crs.contains("properties") &&
                   crs["properties"].is_object() &&
                   crs["properties"].contains("name") &&
                   crs["properties"]["name"].is_string()) {
            crs_tag = crs["properties"]["name"].get<std::string>();
        } else {
            throw ParseError("geojson crs member is malformed");
        }
    }

    if (!root.contains("features") || !root["features"].is_array()) {
        throw ParseError("geojson FeatureCollection needs a features array");
    }

    std::vector<Zone> zones;
    std::size_t idx = 0;
    for (const json& feature : root["features"]) {
        if (!feature.is_object() || feature.value("type", "") != "Feature") {
            throw ParseError("feature " + std::to_string(idx) +
                             ": not a Feature object");
        }
        if (!feature.contains("properties") ||
            !feature["properties"].is_object()) {
            throw SchemaError("feature " + std::to_string(idx) +
                              ": missing properties object");
        }
        const json& props = feature["properties"];
        ZoneAttributes attrs{
            property_text(props, "ward_name", idx),
            property_text(props, "lga_code", idx),
            property_text(props, "lga_name", idx),
            property_text(props, "state_code", idx),
            property_text(props, "state_name", idx),
        };
        if (attrs.ward_name.empty()) {
            throw SchemaError("feature " + std::to_string(idx) +
                              ": ward_name must be non-empty");
        }

        if (!feature.contains("geometry") || !feature["geometry"].is_object()) {
            throw ParseError("feature " + std::to_string(idx) +
                             ": missing geometry");
        }
        const json& geom = feature["geometry"];
        const std::string gtype = geom.value("type", "");
        if (!geom.contains("coordinates")) {
            throw ParseError("feature " + std::to_string(idx) +
                             ": geometry has no coordinates");
        }
        const json& coords = geom["coordinates"];

        std::vector<Polygon> parts;
        if (gtype == "Polygon") {
            parts.push_back(polygon_from_coords(coords, idx));
        } else if (gtype == "MultiPolygon") {
            if (!coords.is_array() || coords.empty()) {
                throw ParseError("feature " + std::to_string(idx) +
                                 ": empty MultiPolygon");
            }
            for (const json& poly : coords) {
                parts.push_back(polygon_from_coords(poly, idx));
            }
        } else {
            throw ParseError("feature " + std::to_string(idx) +
                             ": unsupported geometry type '" + gtype + "'");
        }
        zones.emplace_back(std::move(parts), std::move(attrs));
        ++idx;
    }
    return ZoneSet(std::move(zones), std::move(crs_tag));
}

ZoneSet read_geojson_zones(const std::string& text)
{
    std::istringstream in(text);
    return read_geojson_zones(in);
}

ZoneSet read_geojson_zones_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoFailure("cannot open zones file: " + path.string());
    }
    return read_geojson_zones(in);
}

std::vector<Polygon> all_parts(const ZoneSet& zs)
{
    std::vector<Polygon> parts;
    for (const Zone& z : zs.zones()) {
        parts.insert(parts.end(), z.parts().begin(), z.parts().end());
    }
    return parts;
}

} // namespace gridpop
