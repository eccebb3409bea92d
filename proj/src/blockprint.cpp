#include "craftgen/blockprint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "craftgen/error.hpp"
#include "craftgen/rng.hpp"

namespace craftgen::blockprint {
namespace {

using geom::convex_inset;
using geom::cross;
using geom::lerp;
using geom::norm;
using geom::rotate;
using geom::signed_area;

constexpr int kArcSegments = 32;
constexpr double kCornerMargin = 0.05;
// Endpoints sharing an edge keep this parameter gap so chords never start
// from (almost) the same point.
constexpr double kEndpointGap = 0.05;
constexpr int kEndpointAttempts = 16;
constexpr int kChordAttempts = 256;
// Recursive splits keep endpoints near the middle of their edges and reject
// cuts that leave either side with less than this share of the parent.
constexpr double kSplitLow = 0.25;
constexpr double kSplitHigh = 0.75;
constexpr double kMinSplitShare = 0.2;
constexpr int kSplitAttempts = 32;

Point edge_point(const Polygon& poly, EdgePoint ep) {
    const auto n = poly.size();
    return lerp(poly[static_cast<std::size_t>(ep.edge)],
                poly[(static_cast<std::size_t>(ep.edge) + 1) % n], ep.t);
}

std::vector<Point> chord_polyline(Point a, Point b, ChordKind kind, double curvature) {
    if (kind == ChordKind::straight || curvature == 0.0) return {a, b};
    const Point d = b - a;
    const Point left{-d.y, d.x};
    const Point ctrl = lerp(a, b, 0.5) + curvature * left;
    std::vector<Point> out;
    out.reserve(kArcSegments + 1);
    for (int i = 0; i <= kArcSegments; ++i) {
        const double u = static_cast<double>(i) / kArcSegments;
        const double w0 = (1.0 - u) * (1.0 - u);
        const double w1 = 2.0 * u * (1.0 - u);
        const double w2 = u * u;
        out.push_back({w0 * a.x + w1 * ctrl.x + w2 * b.x, w0 * a.y + w1 * ctrl.y + w2 * b.y});
    }
    out.front() = a;
    out.back() = b;
    return out;
}

bool interior_inside(const Polygon& shape, const std::vector<Point>& path, double margin) {
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
        if (convex_inset(shape, path[i]) < margin) return false;
    }
    return true;
}

// Boundary walk from the vertex after edge `from_edge` up to and including
// the start vertex of `to_edge`.
void append_boundary(const Polygon& poly, int from_edge, int to_edge, std::vector<Point>& out) {
    const int n = static_cast<int>(poly.size());
    int k = (from_edge + 1) % n;
    while (true) {
        out.push_back(poly[static_cast<std::size_t>(k)]);
        if (k == to_edge) break;
        k = (k + 1) % n;
    }
}

std::pair<Polygon, Polygon> split_convex(const Polygon& poly, EdgePoint from, EdgePoint to) {
    const Point a = edge_point(poly, from);
    const Point b = edge_point(poly, to);
    Polygon first{a};
    append_boundary(poly, from.edge, to.edge, first);
    first.push_back(b);
    Polygon second{b};
    append_boundary(poly, to.edge, from.edge, second);
    second.push_back(a);
    return {std::move(first), std::move(second)};
}

int path_crossings(const std::vector<Point>& p, const std::vector<Point>& q) {
    int crossings = 0;
    for (std::size_t a = 0; a + 1 < p.size(); ++a) {
        for (std::size_t b = 0; b + 1 < q.size(); ++b) {
            if (geom::segment_crossing(p[a], p[a + 1], q[b], q[b + 1])) ++crossings;
        }
    }
    return crossings;
}

void check_endpoints(const Chord& c, int edges) {
    if (c.from.edge < 0 || c.from.edge >= edges || c.to.edge < 0 || c.to.edge >= edges) {
        throw Error("chord edge index out of range");
    }
    if (c.from.edge == c.to.edge) throw Error("chord endpoints must lie on distinct edges");
    if (!(c.from.t >= 0.0 && c.from.t <= 1.0 && c.to.t >= 0.0 && c.to.t <= 1.0)) {
        throw Error("chord edge parameter outside [0,1]");
    }
    if (!(std::abs(c.curvature) <= kMaxCurvature)) throw Error("chord curvature outside [-0.4,0.4]");
    if (c.kind == ChordKind::straight && c.curvature != 0.0) {
        throw Error("straight chord with nonzero curvature");
    }
}

}  // namespace

std::string_view to_string(ShapeKind kind) {
    switch (kind) {
        case ShapeKind::square: return "square";
        case ShapeKind::triangle: return "triangle";
        case ShapeKind::hexagon: return "hexagon";
    }
    return "square";
}

ShapeKind shape_kind_from_string(std::string_view name) {
    if (name == "square") return ShapeKind::square;
    if (name == "triangle") return ShapeKind::triangle;
    if (name == "hexagon") return ShapeKind::hexagon;
    throw Error("unknown shape kind: " + std::string(name));
}

std::string_view to_string(DivideStyle style) {
    return style == DivideStyle::block_divide ? "block_divide" : "recursive_divide";
}

DivideStyle divide_style_from_string(std::string_view name) {
    if (name == "block_divide") return DivideStyle::block_divide;
    if (name == "recursive_divide") return DivideStyle::recursive_divide;
    throw Error("unknown divide style: " + std::string(name));
}

std::string_view to_string(RotationMode mode) {
    switch (mode) {
        case RotationMode::none: return "none";
        case RotationMode::seeded: return "seeded";
        case RotationMode::fixed: return "fixed";
    }
    return "none";
}

RotationMode rotation_mode_from_string(std::string_view name) {
    if (name == "none") return RotationMode::none;
    if (name == "seeded") return RotationMode::seeded;
    if (name == "fixed") return RotationMode::fixed;
    throw Error("unknown rotation mode: " + std::string(name));
}

BaseShape::BaseShape(ShapeKind kind, double side) : kind_(kind), side_(side) {
    if (!(side > 0.0) || !std::isfinite(side)) throw Error("shape side length must be positive");
    const double s = side;
    switch (kind) {
        case ShapeKind::square:
            vertices_ = {{0.0, 0.0}, {s, 0.0}, {s, s}, {0.0, s}};
            break;
        case ShapeKind::triangle:
            vertices_ = {{0.0, 0.0}, {s, 0.0}, {0.5 * s, 0.5 * std::numbers::sqrt3 * s}};
            break;
        case ShapeKind::hexagon:
            // Pointy-top, centered on the origin.
            for (int k = 0; k < 6; ++k) {
                const double a = (-90.0 + 60.0 * k) * std::numbers::pi / 180.0;
                vertices_.push_back({s * std::cos(a), s * std::sin(a)});
            }
            vertices_[0] = {0.0, -s};
            vertices_[3] = {0.0, s};
            break;
    }
}

Point BaseShape::centroid() const { return geom::centroid(vertices_); }

std::vector<int> BaseShape::allowed_rotations() const {
    if (kind_ == ShapeKind::square) return {0, 90, 180, 270};
    return {0, 120, 240};
}

BlockDesign::BlockDesign(BaseShape shape, DivideStyle style, std::uint64_t seed,
                         std::vector<Chord> chords)
    : shape_(std::move(shape)), style_(style), seed_(seed), chords_(std::move(chords)) {
    const Polygon& outer = shape_.vertices();
    if (style_ == DivideStyle::block_divide) {
        if (chords_.size() > static_cast<std::size_t>(kMaxBlockChords)) {
            throw Error("too many chords for a block-divide design");
        }
        for (const auto& c : chords_) {
            if (c.region != -1) throw Error("block-divide chords must reference the outer block");
            check_endpoints(c, shape_.edge_count());
            auto path = chord_polyline(edge_point(outer, c.from), edge_point(outer, c.to), c.kind,
                                       c.curvature);
            if (!interior_inside(outer, path, 0.0)) throw Error("curved chord leaves the block");
            Polygon side = path;
            append_boundary(outer, c.to.edge, c.from.edge, side);
            side_polygons_.push_back(std::move(side));
            paths_.push_back(std::move(path));
        }
        // Each pair crosses at most once, so every face has a distinct
        // side bitmask. Euler's formula: every chord adds one face plus one
        // per interior crossing.
        int crossings = 0;
        for (std::size_t i = 0; i < paths_.size(); ++i) {
            for (std::size_t j = i + 1; j < paths_.size(); ++j) {
                const int k = path_crossings(paths_[i], paths_[j]);
                if (k > 1) throw Error("chords cross more than once");
                crossings += k;
            }
        }
        region_count_ = 1 + static_cast<int>(chords_.size()) + crossings;
        return;
    }

    leaves_.push_back(outer);
    for (const auto& c : chords_) {
        if (c.region < 0 || c.region >= static_cast<int>(leaves_.size())) {
            throw Error("chord references a region that does not exist");
        }
        if (c.kind != ChordKind::straight) throw Error("recursive-divide chords must be straight");
        const Polygon& target = leaves_[static_cast<std::size_t>(c.region)];
        check_endpoints(c, static_cast<int>(target.size()));
        auto [first, second] = split_convex(target, c.from, c.to);
        const double tiny = 1e-12 * shape_.side() * shape_.side();
        if (signed_area(first) <= tiny || signed_area(second) <= tiny) {
            throw Error("degenerate recursive split");
        }
        paths_.push_back({edge_point(target, c.from), edge_point(target, c.to)});
        leaves_[static_cast<std::size_t>(c.region)] = std::move(first);
        leaves_.push_back(std::move(second));
    }
    region_count_ = static_cast<int>(leaves_.size());
}

std::uint64_t BlockDesign::region_at(Point p) const {
    if (style_ == DivideStyle::recursive_divide) {
        std::size_t best = 0;
        double best_inset = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < leaves_.size(); ++i) {
            const double inset = convex_inset(leaves_[i], p);
            if (inset >= 0.0) return i;
            if (inset > best_inset) {
                best_inset = inset;
                best = i;
            }
        }
        return best;
    }
    std::uint64_t code = 0;
    for (std::size_t i = 0; i < side_polygons_.size(); ++i) {
        if (geom::contains(side_polygons_[i], p)) code |= std::uint64_t{1} << i;
    }
    return code;
}

namespace {

double draw_endpoint(Rng& rng, const std::vector<Chord>& chords, int edge) {
    double t = 0.0;
    for (int attempt = 0; attempt < kEndpointAttempts; ++attempt) {
        t = rng.uniform(kCornerMargin, 1.0 - kCornerMargin);
        bool clear = true;
        for (const auto& c : chords) {
            for (const EdgePoint& e : {c.from, c.to}) {
                if (e.edge == edge && std::abs(e.t - t) < kEndpointGap) clear = false;
            }
        }
        if (clear) break;
    }
    return t;
}

}  // namespace

BlockDesign block_divide(const BaseShape& shape, int n_chords, std::uint64_t seed,
                         bool allow_curves) {
    if (n_chords < 1) throw Error("block divide needs at least one chord");
    if (n_chords > kMaxBlockChords) throw Error("too many chords for a block-divide design");

    Rng rng(seed);
    const Polygon& outer = shape.vertices();
    const auto n = static_cast<std::uint64_t>(shape.edge_count());
    const double margin = 1e-6 * shape.side();
    std::vector<Chord> chords;
    std::vector<std::vector<Point>> paths;
    auto crosses_once = [&](const std::vector<Point>& path) {
        for (const auto& other : paths) {
            if (path_crossings(path, other) > 1) return false;
        }
        return true;
    };
    for (int i = 0; i < n_chords; ++i) {
        bool placed = false;
        for (int attempt = 0; attempt < kChordAttempts && !placed; ++attempt) {
            Chord c;
            c.from.edge = static_cast<int>(rng.below(n));
            c.to.edge = static_cast<int>(
                (static_cast<std::uint64_t>(c.from.edge) + 1 + rng.below(n - 1)) % n);
            c.from.t = draw_endpoint(rng, chords, c.from.edge);
            c.to.t = draw_endpoint(rng, chords, c.to.edge);
            const bool curved = allow_curves && rng.coin();
            const double bulge = rng.uniform(-kMaxCurvature, kMaxCurvature);
            const Point a = edge_point(outer, c.from);
            const Point b = edge_point(outer, c.to);
            if (curved) {
                // Flip, then shrink, until the arc stays inside the block.
                double k = bulge;
                for (int step = 0; step < 10 && k != 0.0; ++step) {
                    if (interior_inside(outer, chord_polyline(a, b, ChordKind::curved, k), margin)) break;
                    if (interior_inside(outer, chord_polyline(a, b, ChordKind::curved, -k), margin)) {
                        k = -k;
                        break;
                    }
                    k *= 0.5;
                }
                auto arc = chord_polyline(a, b, ChordKind::curved, k);
                if (k != 0.0 && interior_inside(outer, arc, margin) && crosses_once(arc)) {
                    c.kind = ChordKind::curved;
                    c.curvature = k;
                    paths.push_back(std::move(arc));
                    chords.push_back(c);
                    placed = true;
                    continue;
                }
            }
            // Straight fallback; it may still cross an earlier arc twice.
            auto line = chord_polyline(a, b, ChordKind::straight, 0.0);
            if (crosses_once(line)) {
                paths.push_back(std::move(line));
                chords.push_back(c);
                placed = true;
            }
        }
        if (!placed) throw Error("could not place a chord crossing each other chord at most once");
    }
    return BlockDesign(shape, DivideStyle::block_divide, seed, std::move(chords));
}

BlockDesign recursive_divide(const BaseShape& shape, int depth, std::uint64_t seed) {
    if (depth < 0) throw Error("recursion depth must be non-negative");
    if (depth > kMaxRecursiveDepth) throw Error("recursion depth too large");

    Rng rng(seed);
    std::vector<Polygon> regions{shape.vertices()};
    std::vector<Chord> chords;
    for (int level = 0; level < depth; ++level) {
        const std::size_t count = regions.size();
        for (std::size_t r = 0; r < count; ++r) {
            const Polygon& poly = regions[r];
            const int edges = static_cast<int>(poly.size());
            const double area = signed_area(poly);

            Chord best;
            double best_share = -1.0;
            for (int attempt = 0; attempt < kSplitAttempts; ++attempt) {
                Chord c;
                c.region = static_cast<int>(r);
                c.from.edge = static_cast<int>(rng.below(static_cast<std::uint64_t>(edges)));
                std::vector<int> options;
                for (int e = 0; e < edges; ++e) {
                    const bool adjacent =
                        e == (c.from.edge + 1) % edges || (e + 1) % edges == c.from.edge;
                    if (e != c.from.edge && (edges < 4 || !adjacent)) options.push_back(e);
                }
                c.to.edge = options[rng.below(options.size())];
                c.from.t = rng.uniform(kSplitLow, kSplitHigh);
                c.to.t = rng.uniform(kSplitLow, kSplitHigh);
                const auto [a, b] = split_convex(poly, c.from, c.to);
                const double share = std::min(signed_area(a), signed_area(b)) / area;
                if (share > best_share) {
                    best_share = share;
                    best = c;
                }
                if (share >= kMinSplitShare) break;
            }
            auto [a, b] = split_convex(poly, best.from, best.to);
            regions[r] = std::move(a);
            regions.push_back(std::move(b));
            chords.push_back(best);
        }
    }
    return BlockDesign(shape, DivideStyle::recursive_divide, seed, std::move(chords));
}

Pattern::Pattern(BlockDesign block, int rows, int cols, RotationPolicy policy, std::uint64_t seed,
                 std::vector<int> rotations)
    : block_(std::move(block)),
      rows_(rows),
      cols_(cols),
      policy_(policy),
      seed_(seed),
      rotations_(std::move(rotations)) {
    if (rows_ < 1 || cols_ < 1) throw Error("pattern rows and cols must be at least 1");
    if (rotations_.size() != static_cast<std::size_t>(rows_) * cols_) {
        throw Error("pattern needs one rotation per cell");
    }
    const auto allowed = block_.shape().allowed_rotations();
    for (int r : rotations_) {
        if (std::find(allowed.begin(), allowed.end(), r) == allowed.end()) {
            throw Error("rotation " + std::to_string(r) + " not allowed for " +
                        std::string(to_string(block_.shape().kind())));
        }
    }
    if (policy_.mode == RotationMode::none &&
        std::any_of(rotations_.begin(), rotations_.end(), [](int r) { return r != 0; })) {
        throw Error("rotation policy none requires zero rotations");
    }
}

Bounds Pattern::board() const {
    const double s = block_.shape().side();
    switch (block_.shape().kind()) {
        case ShapeKind::square:
            return {cols_ * s, rows_ * s};
        case ShapeKind::triangle:
            return {0.5 * (cols_ + 1) * s, rows_ * 0.5 * std::numbers::sqrt3 * s};
        case ShapeKind::hexagon: {
            const double w = std::numbers::sqrt3 * s;
            return {w * cols_ + (rows_ > 1 ? 0.5 * w : 0.0), 1.5 * s * (rows_ - 1) + 2.0 * s};
        }
    }
    return {};
}

std::vector<Placement> Pattern::placements() const {
    const double s = block_.shape().side();
    std::vector<Placement> out;
    out.reserve(rotations_.size());
    for (int r = 0; r < rows_; ++r) {
        for (int c = 0; c < cols_; ++c) {
            Placement p;
            p.rotation = rotations_[static_cast<std::size_t>(r) * cols_ + c];
            switch (block_.shape().kind()) {
                case ShapeKind::square:
                    p.center = {(c + 0.5) * s, (r + 0.5) * s};
                    break;
                case ShapeKind::triangle: {
                    const double h = 0.5 * std::numbers::sqrt3 * s;
                    const bool inverted = (r + c) % 2 == 1;
                    p.center = {0.5 * c * s + 0.5 * s, r * h + (inverted ? 2.0 : 1.0) * h / 3.0};
                    p.orientation = inverted ? 180 : 0;
                    break;
                }
                case ShapeKind::hexagon: {
                    const double w = std::numbers::sqrt3 * s;
                    p.center = {w * (c + 0.5 * (r % 2)) + 0.5 * w, 1.5 * s * r + s};
                    break;
                }
            }
            out.push_back(p);
        }
    }
    return out;
}

Pattern tile_pattern(BlockDesign block, int rows, int cols, RotationPolicy policy,
                     std::uint64_t seed) {
    if (rows < 1 || cols < 1) throw Error("pattern rows and cols must be at least 1");
    const auto cells = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
    const auto allowed = block.shape().allowed_rotations();
    std::vector<int> rotations(cells, 0);
    switch (policy.mode) {
        case RotationMode::none:
            break;
        case RotationMode::fixed:
            if (std::find(allowed.begin(), allowed.end(), policy.fixed_degrees) == allowed.end()) {
                throw Error("fixed rotation " + std::to_string(policy.fixed_degrees) +
                            " not allowed for " + std::string(to_string(block.shape().kind())));
            }
            std::fill(rotations.begin(), rotations.end(), policy.fixed_degrees);
            break;
        case RotationMode::seeded: {
            Rng rng(seed);
            for (auto& r : rotations) r = allowed[rng.below(allowed.size())];
            break;
        }
    }
    return Pattern(std::move(block), rows, cols, policy, seed, std::move(rotations));
}

RegionRaster rasterize_regions(const Pattern& pattern, int px) {
    if (px < kMinRenderSize) throw Error("render size must be at least 64 pixels");
    const Bounds board = pattern.board();
    const int width = px;
    const int height = std::max(1, static_cast<int>(std::lround(px * board.height / board.width)));
    const double scale = px / board.width;

    const BlockDesign& block = pattern.block();
    const Polygon& shape = block.shape().vertices();
    const Point centroid = block.shape().centroid();
    const double slack = -1e-9 * block.shape().side();

    RegionRaster out;
    out.width = width;
    out.height = height;
    const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    out.tile.assign(n, -1);
    std::vector<std::uint64_t> code(n, 0);

    const auto placements = pattern.placements();
    for (std::size_t t = 0; t < placements.size(); ++t) {
        const Placement& pl = placements[t];
        const int turn = pl.orientation + pl.rotation;
        double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
        for (const auto& v : shape) {
            const Point w = pl.center + rotate(v - centroid, turn);
            x0 = std::min(x0, w.x);
            y0 = std::min(y0, w.y);
            x1 = std::max(x1, w.x);
            y1 = std::max(y1, w.y);
        }
        const int px0 = std::max(0, static_cast<int>(std::floor(x0 * scale)) - 1);
        const int py0 = std::max(0, static_cast<int>(std::floor(y0 * scale)) - 1);
        const int px1 = std::min(width - 1, static_cast<int>(std::ceil(x1 * scale)) + 1);
        const int py1 = std::min(height - 1, static_cast<int>(std::ceil(y1 * scale)) + 1);
        // Offsets are formed in pixel units so that translated copies see
        // bit-identical local coordinates when the pitch is a whole number
        // of pixels.
        const double cx = pl.center.x * scale;
        const double cy = pl.center.y * scale;
        for (int y = py0; y <= py1; ++y) {
            for (int x = px0; x <= px1; ++x) {
                const std::size_t i = static_cast<std::size_t>(y) * width + x;
                if (out.tile[i] >= 0) continue;
                const Point offset{((x + 0.5) - cx) / scale, ((y + 0.5) - cy) / scale};
                const Point local = centroid + rotate(offset, -turn);
                if (convex_inset(shape, local) < slack) continue;
                out.tile[i] = static_cast<int>(t);
                code[i] = block.region_at(local);
            }
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (out.tile[i] >= 0) out.codes.push_back(code[i]);
    }
    std::sort(out.codes.begin(), out.codes.end());
    out.codes.erase(std::unique(out.codes.begin(), out.codes.end()), out.codes.end());
    out.region.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        if (out.tile[i] < 0) continue;
        out.region[i] = static_cast<int>(
            std::lower_bound(out.codes.begin(), out.codes.end(), code[i]) - out.codes.begin());
    }
    return out;
}

std::vector<std::size_t> assign_region_colors(const RegionRaster& regions, std::size_t palette_size,
                                              std::uint64_t seed) {
    if (palette_size == 0) throw Error("empty palette");
    const std::size_t k = regions.codes.size();
    std::vector<std::vector<int>> adjacent(k);
    auto link = [&](std::size_t i, std::size_t j) {
        if (regions.tile[i] < 0 || regions.tile[i] != regions.tile[j]) return;
        const int a = regions.region[i];
        const int b = regions.region[j];
        if (a == b) return;
        adjacent[static_cast<std::size_t>(a)].push_back(b);
        adjacent[static_cast<std::size_t>(b)].push_back(a);
    };
    for (int y = 0; y < regions.height; ++y) {
        for (int x = 0; x < regions.width; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * regions.width + x;
            if (x + 1 < regions.width) link(i, i + 1);
            if (y + 1 < regions.height) link(i, i + static_cast<std::size_t>(regions.width));
        }
    }

    Rng rng(seed);
    constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> color(k, kUnset);
    for (std::size_t r = 0; r < k; ++r) {
        std::vector<bool> taken(palette_size, false);
        for (int nb : adjacent[r]) {
            const std::size_t c = color[static_cast<std::size_t>(nb)];
            if (c != kUnset) taken[c] = true;
        }
        std::vector<std::size_t> options;
        for (std::size_t c = 0; c < palette_size; ++c) {
            if (!taken[c]) options.push_back(c);
        }
        if (options.empty()) {
            color[r] = rng.below(palette_size);
        } else {
            color[r] = options[rng.below(options.size())];
        }
    }
    return color;
}

Raster render_pattern(const Pattern& pattern, std::span<const RgbColor> palette, int px) {
    if (palette.empty()) throw Error("empty palette");
    const RegionRaster regions = rasterize_regions(pattern, px);
    const auto color = assign_region_colors(regions, palette.size(),
                                            mix_seed(pattern.seed() ^ pattern.block().seed(), 7));
    Raster out(regions.width, regions.height, palette.front());
    auto pixels = out.pixels();
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        if (regions.tile[i] >= 0) pixels[i] = palette[color[static_cast<std::size_t>(regions.region[i])]];
    }
    return out;
}

}  // namespace craftgen::blockprint
