#include "craftgen/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

namespace craftgen::geom {

double signed_area(std::span<const Point> poly) {
    double acc = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        acc += cross(poly[i], poly[(i + 1) % poly.size()]);
    }
    return 0.5 * acc;
}

Point centroid(std::span<const Point> poly) {
    Point c;
    for (const auto& p : poly) c = c + p;
    return (1.0 / static_cast<double>(poly.size())) * c;
}

double convex_inset(std::span<const Point> poly, Point p) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point a = poly[i];
        const Point e = poly[(i + 1) % poly.size()] - a;
        const double len = norm(e);
        if (len == 0.0) continue;
        best = std::min(best, cross(e, p - a) / len);
    }
    return best;
}

bool contains(std::span<const Point> poly, Point p) {
    bool inside = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const Point a = poly[i];
        const Point b = poly[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x) inside = !inside;
        }
    }
    return inside;
}

Point rotate(Point p, int degrees) {
    const int d = ((degrees % 360) + 360) % 360;
    switch (d) {
        case 0: return p;
        case 90: return {-p.y, p.x};
        case 180: return {-p.x, -p.y};
        case 270: return {p.y, -p.x};
        default: break;
    }
    const double r = d * std::numbers::pi / 180.0;
    const double c = std::cos(r);
    const double s = std::sin(r);
    return {c * p.x - s * p.y, s * p.x + c * p.y};
}

std::optional<std::pair<double, double>> segment_crossing(Point a0, Point a1, Point b0, Point b1) {
    const Point da = a1 - a0;
    const Point db = b1 - b0;
    const double denom = cross(da, db);
    if (denom == 0.0) return std::nullopt;
    const Point d = b0 - a0;
    const double s = cross(d, db) / denom;
    const double u = cross(d, da) / denom;
    if (s <= 0.0 || s >= 1.0 || u <= 0.0 || u >= 1.0) return std::nullopt;
    return std::make_pair(s, u);
}

}  // namespace craftgen::geom
