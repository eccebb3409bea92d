#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

namespace craftgen::geom {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend Point operator*(double k, Point a) { return {k * a.x, k * a.y}; }
    friend bool operator==(const Point&, const Point&) = default;
};

using Polygon = std::vector<Point>;

inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline Point lerp(Point a, Point b, double t) { return a + t * (b - a); }

/// Shoelace area, positive for counter-clockwise vertex order.
double signed_area(std::span<const Point> poly);

Point centroid(std::span<const Point> poly);

/// Minimum signed distance from p to the edge lines of a counter-clockwise
/// convex polygon; non-negative iff p is inside or on the boundary.
double convex_inset(std::span<const Point> poly, Point p);

/// Even-odd crossing test; works for simple non-convex polygons.
bool contains(std::span<const Point> poly, Point p);

/// Rotation by a whole number of degrees; multiples of 90 are exact.
Point rotate(Point p, int degrees);

/// Parameters (s, u) of the proper crossing of segments a0a1 and b0b1,
/// both strictly inside (0, 1); nullopt when parallel or not crossing.
std::optional<std::pair<double, double>> segment_crossing(Point a0, Point a1, Point b0, Point b1);

}  // namespace craftgen::geom
