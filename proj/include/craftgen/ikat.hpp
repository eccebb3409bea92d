#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "craftgen/color.hpp"
#include "craftgen/raster.hpp"

namespace craftgen::ikat {

/// A black-on-white line drawing. Construction validates that every pixel is
/// gray (channels equal within 1/255) and that the threshold lies in (0, 1).
class Motif {
public:
    explicit Motif(Raster raster, double threshold = 0.5);

    const Raster& raster() const { return raster_; }
    double threshold() const { return threshold_; }
    int width() const { return raster_.width(); }
    int height() const { return raster_.height(); }

    /// Pixels at or above the threshold belong to colorable regions.
    bool is_light(int x, int y) const { return raster_.at(x, y).r >= threshold_; }

private:
    Raster raster_;
    double threshold_;
};

/// Ordered, non-empty, pairwise-distinct colors used for primitive coloring.
class PrimitivePalette {
public:
    /// White, black, red, blue, yellow.
    PrimitivePalette();
    explicit PrimitivePalette(std::vector<RgbColor> colors);

    const std::vector<RgbColor>& colors() const { return colors_; }

private:
    std::vector<RgbColor> colors_;
};

/// n x n lattice of flat cell colors, row-major.
class GridDesign {
public:
    GridDesign(int n, std::vector<RgbColor> cells);

    int n() const { return n_; }
    const RgbColor& cell(int row, int col) const {
        return cells_[static_cast<std::size_t>(row) * n_ + col];
    }
    const std::vector<RgbColor>& cells() const { return cells_; }

    /// Each cell becomes a cell_px x cell_px block.
    Raster render(int cell_px) const;

    friend bool operator==(const GridDesign&, const GridDesign&) = default;

private:
    int n_;
    std::vector<RgbColor> cells_;
};

/// A colorization stage: motif + seed -> colored raster of the same size.
/// The primitive colorizer is the default; a learned model can be slotted in.
using Colorizer = std::function<Raster(const Motif&, std::uint64_t seed)>;

/// Binarizes the motif, labels 4-connected light regions and paints each
/// region with a seeded draw from the palette. Dark pixels stay black.
/// Throws Error("no colorable regions") for an all-dark motif.
Raster primitive_colorize(const Motif& motif, const PrimitivePalette& palette,
                          std::uint64_t seed);

Colorizer primitive_colorizer(PrimitivePalette palette);

/// Runs the stage and enforces that its output matches the motif size.
Raster colorize_stage(const Motif& motif, const Colorizer& stage, std::uint64_t seed);

Raster transfer_from_inspiration(const Raster& primitive, const Raster& inspiration);
Raster transfer_from_inspiration(const Raster& primitive, const Raster& inspiration,
                                 GamutTally& tally);

/// Mean color per cell of an n x n lattice. Remainder pixels fold into the
/// last row and column of cells.
GridDesign grid_quantize(const Raster& img, int n = 128);

struct IkatOptions {
    PrimitivePalette palette;
    std::uint64_t seed = 0;
    int grid = 128;
};

GridDesign run_ikat_pipeline(const Motif& motif, const Raster& inspiration,
                             const IkatOptions& options);
GridDesign run_ikat_pipeline(const Motif& motif, const Raster& inspiration,
                             const IkatOptions& options, GamutTally& tally);

}  // namespace craftgen::ikat
