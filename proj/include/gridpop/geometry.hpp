// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef GRIDPOP_GEOMETRY_HPP
#define GRIDPOP_GEOMETRY_HPP

#include <optional>
#include <vector>

namespace gridpop {

/// A planar point in map units. Coordinates must be finite.
struct Point {
    double x;
    double y;

    Point(double x, double y);
};

/// Axis-aligned rectangle, min corner strictly below max corner.
struct Rect {
    double min_x;
    double min_y;
    double max_x;
    double max_y;

    Rect(double min_x, double min_y, double max_x, double max_y);

    double width() const { return max_x - min_x; }
    double height() const { return max_y - min_y; }
    double area() const { return width() * height(); }

    /// Closed containment: boundary points count as inside.
    bool contains(const Point& p) const
    {
        return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
    }

    bool intersects(const Rect& o) const
    {
        return min_x <= o.max_x && o.min_x <= max_x && min_y <= o.max_y &&
               o.min_y <= max_y;
    }
};

/// A simple closed ring. The closing vertex is implicit: the first vertex is
/// not repeated in storage (a trailing duplicate of the first vertex is
/// stripped on construction). At least three distinct vertices are required.
class Ring {
  public:
    explicit Ring(std::vector<Point> vertices);

    const std::vector<Point>& vertices() const { return vertices_; }

    /// Shoelace area; positive for counter-clockwise winding.
    double signed_area() const;

    Rect bounding_box() const;

  private:
    std::vector<Point> vertices_;
};

/// A polygon with an exterior ring and optional holes. The exterior must
/// have non-zero area and no hole may be larger than the exterior. Holes are
/// assumed disjoint and contained in the exterior; multi-part zones are
/// represented as lists of Polygons rather than a multi-polygon type.
class Polygon {
  public:
    explicit Polygon(Ring exterior, std::vector<Ring> holes = {});

    const Ring& exterior() const { return exterior_; }
    const std::vector<Ring>& holes() const { return holes_; }

    Rect bounding_box() const { return exterior_.bounding_box(); }

  private:
    Ring exterior_;
    std::vector<Ring> holes_;
};

/// Clip outputs with less area than this are treated as empty (sliver noise).
inline constexpr double kDegenerateArea = 1e-12;

/// |shoelace(exterior)| minus the hole areas. Non-negative for valid input.
double polygon_area(const Polygon& p);

/// Even-odd containment. Points exactly on a boundary edge (exterior or
/// hole) count as inside; holes otherwise exclude.
bool point_in_polygon(const Point& pt, const Polygon& p);

/// Sutherland-Hodgman clip against an axis-aligned rectangle. Returns
/// nullopt when the intersection is empty or degenerate (area below
/// kDegenerateArea).
std::optional<Polygon> clip_polygon_to_rect(const Polygon& p, const Rect& r);

/// area(p intersect cell) / area(cell), snapped to exact 0 or 1 within 1e-12
/// so that fully covered cells weigh exactly one.
double coverage_fraction(const Polygon& p, const Rect& cell);

Polygon polygon_from_rect(const Rect& r);

} // namespace gridpop

#endif // GRIDPOP_GEOMETRY_HPP
