// Apache License, Version 2.0, refer to LICENSE.txt

#include "gridpop/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gridpop {

namespace {

double shoelace(const std::vector<Point>& v)
{
    // Triangle fan anchored at the first vertex. Translating by v[0] keeps
    // the cross products small when coordinates are far from the origin.
    const double x0 = v[0].x;
    const double y0 = v[0].y;
    double acc = 0.0;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        const double ax = v[i].x - x0;
        const double ay = v[i].y - y0;
        const double bx = v[i + 1].x - x0;
        const double by = v[i + 1].y - y0;
        acc += ax * by - ay * bx;
    }
    return 0.5 * acc;
}

bool point_on_segment(const Point& p, const Point& a, const Point& b)
{
    const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    if (cross != 0.0) {
        return false;
    }
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

bool on_ring_boundary(const Point& p, const Ring& ring)
{
    const auto& v = ring.vertices();
    const std::size_t n = v.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        if (point_on_segment(p, v[j], v[i])) {
            return true;
        }
    }
    return false;
}

// Ray cast to +x with the half-open edge rule, so shared vertices are not
// double counted.
void toggle_ring_crossings(const Point& p, const Ring& ring, bool& inside)
{
    const auto& v = ring.vertices();
    const std::size_t n = v.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point& a = v[i];
        const Point& b = v[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x_int = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
            if (p.x < x_int) {
                inside = !inside;
            }
        }
    }
}

enum class ClipEdge { MinX, MaxX, MinY, MaxY };

bool edge_keeps(ClipEdge e, double bound, const Point& p)
{
    switch (e) {
        case ClipEdge::MinX:
            return p.x >= bound;
        case ClipEdge::MaxX:
            return p.x <= bound;
        case ClipEdge::MinY:
            return p.y >= bound;
        case ClipEdge::MaxY:
            return p.y <= bound;
    }
    return false;
}

Point edge_intersect(ClipEdge e, double bound, const Point& a, const Point& b)
{
    // Only called when a and b straddle the clip line, so the relevant
    // denominator is non-zero. The clipped coordinate is set exactly to the
    // boundary value.
    if (e == ClipEdge::MinX || e == ClipEdge::MaxX) {
        const double t = (bound - a.x) / (b.x - a.x);
        return Point(bound, a.y + t * (b.y - a.y));
    }
    const double t = (bound - a.y) / (b.y - a.y);
    return Point(a.x + t * (b.x - a.x), bound);
}

std::vector<Point> clip_against_edge(const std::vector<Point>& input,
                                     ClipEdge e,
                                     double bound)
{
    std::vector<Point> out;
    out.reserve(input.size() + 4);
    const std::size_t n = input.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& cur = input[i];
        const Point& prev = input[(i + n - 1) % n];
        const bool cur_in = edge_keeps(e, bound, cur);
        const bool prev_in = edge_keeps(e, bound, prev);
        if (cur_in) {
            if (!prev_in) {
                out.push_back(edge_intersect(e, bound, prev, cur));
            }
            out.push_back(cur);
        } else if (prev_in) {
            out.push_back(edge_intersect(e, bound, prev, cur));
        }
    }
    return out;
}

// Clips one ring to a rect; returns the cleaned vertex list, or empty when
// the result is degenerate.
std::vector<Point> clip_ring_vertices(const Ring& ring, const Rect& r)
{
    std::vector<Point> pts = ring.vertices();
    pts = clip_against_edge(pts, ClipEdge::MinX, r.min_x);
    if (pts.size() < 3) {
        return {};
    }
    pts = clip_against_edge(pts, ClipEdge::MaxX, r.max_x);
    if (pts.size() < 3) {
        return {};
    }
    pts = clip_against_edge(pts, ClipEdge::MinY, r.min_y);
    if (pts.size() < 3) {
        return {};
    }
    pts = clip_against_edge(pts, ClipEdge::MaxY, r.max_y);
    if (pts.size() < 3) {
        return {};
    }

    // Drop consecutive duplicates introduced by clipping.
    std::vector<Point> clean;
    clean.reserve(pts.size());
    for (const Point& p : pts) {
        if (clean.empty() || clean.back().x != p.x || clean.back().y != p.y) {
            clean.push_back(p);
        }
    }
    while (clean.size() > 1 && clean.front().x == clean.back().x &&
           clean.front().y == clean.back().y) {
        clean.pop_back();
    }
    if (clean.size() < 3 || std::abs(shoelace(clean)) < kDegenerateArea) {
        return {};
    }
    return clean;
}

} // namespace

Point::Point(double x, double y)
  : x(x)
  , y(y)
{
    if (!std::isfinite(x) || !std::isfinite(y)) {
        throw std::invalid_argument("point coordinates must be finite");
    }
}

Rect::Rect(double min_x, double min_y, double max_x, double max_y)
  : min_x(min_x)
  , min_y(min_y)
  , max_x(max_x)
  , max_y(max_y)
{
    if (!std::isfinite(min_x) || !std::isfinite(min_y) ||
        !std::isfinite(max_x) || !std::isfinite(max_y)) {
        throw std::invalid_argument("rect bounds must be finite");
    }
    if (!(max_x > min_x) || !(max_y > min_y)) {
        throw std::invalid_argument("rect max corner must exceed min corner");
    }
}

Ring::Ring(std::vector<Point> vertices)
  : vertices_(std::move(vertices))
{
    if (vertices_.size() > 1 && vertices_.front().x == vertices_.back().x &&
        vertices_.front().y == vertices_.back().y) {
        vertices_.pop_back();
    }
    std::size_t distinct = 0;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        bool seen = false;
        for (std::size_t j = 0; j < i; ++j) {
            if (vertices_[i].x == vertices_[j].x &&
                vertices_[i].y == vertices_[j].y) {
                seen = true;
                break;
            }
        }
        if (!seen) {
            ++distinct;
        }
    }
    if (distinct < 3) {
        throw std::invalid_argument("ring needs at least 3 distinct vertices");
    }
}

double Ring::signed_area() const
{
    return shoelace(vertices_);
}

Rect Ring::bounding_box() const
{
    double min_x = std::numeric_limits<double>::infinity();
    double min_y = min_x;
    double max_x = -min_x;
    double max_y = -min_x;
    for (const Point& p : vertices_) {
        min_x = std::min(min_x, p.x);
        min_y = std::min(min_y, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }
    return Rect(min_x, min_y, max_x, max_y);
}

Polygon::Polygon(Ring exterior, std::vector<Ring> holes)
  : exterior_(std::move(exterior))
  , holes_(std::move(holes))
{
    const double ext_area = std::abs(exterior_.signed_area());
    if (ext_area <= 0.0) {
        throw std::invalid_argument("polygon exterior has zero area");
    }
    for (const Ring& h : holes_) {
        if (std::abs(h.signed_area()) > ext_area) {
            throw std::invalid_argument("hole area exceeds exterior area");
        }
    }
}

double polygon_area(const Polygon& p)
{
    double area = std::abs(p.exterior().signed_area());
    for (const Ring& h : p.holes()) {
        area -= std::abs(h.signed_area());
    }
    return area;
}

bool point_in_polygon(const Point& pt, const Polygon& p)
{
    if (on_ring_boundary(pt, p.exterior())) {
        return true;
    }
    for (const Ring& h : p.holes()) {
        if (on_ring_boundary(pt, h)) {
            return true;
        }
    }
    bool inside = false;
    toggle_ring_crossings(pt, p.exterior(), inside);
    for (const Ring& h : p.holes()) {
        toggle_ring_crossings(pt, h, inside);
    }
    return inside;
}

std::optional<Polygon> clip_polygon_to_rect(const Polygon& p, const Rect& r)
{
    const std::vector<Point> ext = clip_ring_vertices(p.exterior(), r);
    if (ext.empty()) {
        return std::nullopt;
    }
    const double ext_area = std::abs(shoelace(ext));

    std::vector<Ring> holes;
    double hole_area = 0.0;
    for (const Ring& h : p.holes()) {
        std::vector<Point> hv = clip_ring_vertices(h, r);
        if (hv.empty()) {
            continue;
        }
        const double a = std::abs(shoelace(hv));
        if (a > ext_area) {
            // Floating-point artifact of a hole nearly coincident with the
            // clipped exterior; the net area is degenerate either way.
            return std::nullopt;
        }
        hole_area += a;
        holes.emplace_back(std::move(hv));
    }
    if (ext_area - hole_area < kDegenerateArea) {
        return std::nullopt;
    }
    return Polygon(Ring(ext), std::move(holes));
}

double coverage_fraction(const Polygon& p, const Rect& cell)
{
    const auto clipped = clip_polygon_to_rect(p, cell);
    if (!clipped) {
        return 0.0;
    }
    double frac = polygon_area(*clipped) / cell.area();
    if (frac >= 1.0 - 1e-12) {
        frac = 1.0;
    } else if (frac <= 1e-12) {
        frac = 0.0;
    }
    return frac;
}

Polygon polygon_from_rect(const Rect& r)
{
    return Polygon(Ring({ Point(r.min_x, r.min_y), Point(r.max_x, r.min_y),
                          Point(r.max_x, r.max_y), Point(r.min_x, r.max_y) }));
}

} // namespace gridpop
