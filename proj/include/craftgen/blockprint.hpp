#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "craftgen/color.hpp"
#include "craftgen/geometry.hpp"
#include "craftgen/raster.hpp"

namespace craftgen::blockprint {

using geom::Point;
using geom::Polygon;

enum class ShapeKind { square, triangle, hexagon };

std::string_view to_string(ShapeKind kind);
ShapeKind shape_kind_from_string(std::string_view name);

/// Regular polygon used as the carved block. Vertices are counter-clockwise;
/// edge k runs from vertex k to vertex k+1.
class BaseShape {
public:
    explicit BaseShape(ShapeKind kind, double side = 1.0);

    ShapeKind kind() const { return kind_; }
    double side() const { return side_; }
    const Polygon& vertices() const { return vertices_; }
    int edge_count() const { return static_cast<int>(vertices_.size()); }
    Point centroid() const;
    /// Rotations (degrees) that map the shape onto itself and keep its
    /// tessellation gap-free.
    std::vector<int> allowed_rotations() const;

    friend bool operator==(const BaseShape& a, const BaseShape& b) {
        return a.kind_ == b.kind_ && a.side_ == b.side_;
    }

private:
    ShapeKind kind_;
    double side_;
    Polygon vertices_;
};

/// A point on a polygon boundary: edge index plus parameter along the edge.
struct EdgePoint {
    int edge = 0;
    double t = 0.0;

    friend bool operator==(const EdgePoint&, const EdgePoint&) = default;
};

enum class ChordKind { straight, curved };

inline constexpr double kMaxCurvature = 0.4;

/// A line joining two points on distinct edges. For recursive designs the
/// edges refer to the region being split (`region`), otherwise to the outer
/// block and `region` is -1. Curved chords are quadratic arcs whose control
/// point sits curvature * chord-length off the midpoint, to the left of the
/// from->to direction.
struct Chord {
    int region = -1;
    EdgePoint from;
    EdgePoint to;
    ChordKind kind = ChordKind::straight;
    double curvature = 0.0;

    friend bool operator==(const Chord&, const Chord&) = default;
};

enum class DivideStyle { block_divide, recursive_divide };

std::string_view to_string(DivideStyle style);
DivideStyle divide_style_from_string(std::string_view name);

/// A block with its chords. Construction replays the chords, rejecting any
/// that violate the distinct-edge rule, leave the block, or reference a
/// region that does not exist.
class BlockDesign {
public:
    BlockDesign(BaseShape shape, DivideStyle style, std::uint64_t seed, std::vector<Chord> chords);

    const BaseShape& shape() const { return shape_; }
    DivideStyle style() const { return style_; }
    std::uint64_t seed() const { return seed_; }
    const std::vector<Chord>& chords() const { return chords_; }

    /// Chord i as a polyline in block coordinates (2 points when straight).
    const std::vector<Point>& chord_path(std::size_t i) const { return paths_[i]; }

    /// Number of faces the chords cut the block into.
    int region_count() const { return region_count_; }

    /// Leaf polygons of a recursive design; empty for block-divide designs.
    const std::vector<Polygon>& leaf_regions() const { return leaves_; }

    /// Region code of a block-local point. Leaf index for recursive designs;
    /// bitmask of chord sides for block-divide designs.
    std::uint64_t region_at(Point p) const;

    friend bool operator==(const BlockDesign& a, const BlockDesign& b) {
        return a.shape_ == b.shape_ && a.style_ == b.style_ && a.seed_ == b.seed_ &&
               a.chords_ == b.chords_;
    }

private:
    BaseShape shape_;
    DivideStyle style_;
    std::uint64_t seed_;
    std::vector<Chord> chords_;
    std::vector<std::vector<Point>> paths_;
    std::vector<Polygon> side_polygons_;
    std::vector<Polygon> leaves_;
    int region_count_ = 1;
};

inline constexpr int kMaxBlockChords = 48;
inline constexpr int kMaxRecursiveDepth = 10;

/// n_chords chords between distinct outer edges; endpoints keep 5% of the
/// edge length away from corners. Curved chords are drawn only when
/// allow_curves is set.
BlockDesign block_divide(const BaseShape& shape, int n_chords, std::uint64_t seed,
                         bool allow_curves = true);

/// Splits every region in two at each of depth levels, giving 2^depth
/// convex regions.
BlockDesign recursive_divide(const BaseShape& shape, int depth, std::uint64_t seed);

enum class RotationMode { none, seeded, fixed };

struct RotationPolicy {
    RotationMode mode = RotationMode::none;
    int fixed_degrees = 0;

    friend bool operator==(const RotationPolicy&, const RotationPolicy&) = default;
};

std::string_view to_string(RotationMode mode);
RotationMode rotation_mode_from_string(std::string_view name);

/// Where one copy of the block lands on the board. orientation is the
/// tessellation's own turn (180 for the inverted triangles), rotation is the
/// per-cell policy turn.
struct Placement {
    Point center;
    int orientation = 0;
    int rotation = 0;
};

struct Bounds {
    double width = 0.0;
    double height = 0.0;
};

class Pattern {
public:
    /// rotations holds one angle per cell, row-major; each must be allowed
    /// for the shape.
    Pattern(BlockDesign block, int rows, int cols, RotationPolicy policy, std::uint64_t seed,
            std::vector<int> rotations);

    const BlockDesign& block() const { return block_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const RotationPolicy& policy() const { return policy_; }
    std::uint64_t seed() const { return seed_; }
    const std::vector<int>& rotations() const { return rotations_; }

    std::vector<Placement> placements() const;
    Bounds board() const;

    friend bool operator==(const Pattern&, const Pattern&) = default;

private:
    BlockDesign block_;
    int rows_;
    int cols_;
    RotationPolicy policy_;
    std::uint64_t seed_;
    std::vector<int> rotations_;
};

/// Square grid, alternating up/down triangles, or offset hexagon rows.
Pattern tile_pattern(BlockDesign block, int rows, int cols, RotationPolicy policy,
                     std::uint64_t seed);

/// Per-pixel tile index and region id of a rendered pattern. Pixels outside
/// every tile (the jagged margin of triangle and hexagon boards) have tile -1.
struct RegionRaster {
    int width = 0;
    int height = 0;
    std::vector<int> tile;
    std::vector<int> region;
    /// Region codes that occur, ascending; region ids index into this list.
    std::vector<std::uint64_t> codes;
};

inline constexpr int kMinRenderSize = 64;

/// px is the output width; height follows the board aspect ratio.
RegionRaster rasterize_regions(const Pattern& pattern, int px);

/// Greedy seeded coloring: each region draws from the palette colors not yet
/// used by an adjacent region of the same tile, falling back to the full
/// palette when none remain. Returns the palette index per region id.
std::vector<std::size_t> assign_region_colors(const RegionRaster& regions, std::size_t palette_size,
                                              std::uint64_t seed);

/// Flat-fill render: every pixel is exactly one palette color. The board
/// margin takes the first palette color.
Raster render_pattern(const Pattern& pattern, std::span<const RgbColor> palette, int px);

}  // namespace craftgen::blockprint
