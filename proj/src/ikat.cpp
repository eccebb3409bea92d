#include "craftgen/ikat.hpp"

#include <cmath>
#include <string>

#include "craftgen/error.hpp"
#include "craftgen/labeling.hpp"
#include "craftgen/rng.hpp"

namespace craftgen::ikat {

Motif::Motif(Raster raster, double threshold) : raster_(std::move(raster)), threshold_(threshold) {
    if (raster_.empty()) throw Error("empty raster");
    if (!(threshold_ > 0.0 && threshold_ < 1.0)) throw Error("motif threshold must be in (0,1)");
    constexpr double kGrayTolerance = 1.0 / 255.0;
    for (const auto& p : raster_.pixels()) {
        if (std::abs(p.r - p.g) > kGrayTolerance || std::abs(p.g - p.b) > kGrayTolerance) {
            throw Error("motif is not grayscale");
        }
    }
}

PrimitivePalette::PrimitivePalette()
    : colors_{colors::white, colors::black, colors::red, colors::blue, colors::yellow} {}

PrimitivePalette::PrimitivePalette(std::vector<RgbColor> colors) : colors_(std::move(colors)) {
    if (colors_.empty()) throw Error("primitive palette is empty");
    for (std::size_t i = 0; i < colors_.size(); ++i) {
        for (std::size_t j = i + 1; j < colors_.size(); ++j) {
            if (colors_[i] == colors_[j]) throw Error("primitive palette has duplicate colors");
        }
    }
}

GridDesign::GridDesign(int n, std::vector<RgbColor> cells) : n_(n), cells_(std::move(cells)) {
    if (n_ <= 0) throw Error("grid size must be positive");
    if (cells_.size() != static_cast<std::size_t>(n_) * n_) {
        throw Error("grid cell count does not match n*n");
    }
}

Raster GridDesign::render(int cell_px) const {
    if (cell_px <= 0) throw Error("cell size must be positive");
    Raster out(n_ * cell_px, n_ * cell_px);
    for (int y = 0; y < out.height(); ++y) {
        for (int x = 0; x < out.width(); ++x) out.at(x, y) = cell(y / cell_px, x / cell_px);
    }
    return out;
}

Raster primitive_colorize(const Motif& motif, const PrimitivePalette& palette,
                          std::uint64_t seed) {
    const int w = motif.width();
    const int h = motif.height();
    std::vector<std::uint8_t> light(static_cast<std::size_t>(w) * h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) light[static_cast<std::size_t>(y) * w + x] = motif.is_light(x, y);
    }
    const ComponentLabels regions = label_components(light, w, h);
    if (regions.count == 0) throw Error("no colorable regions");

    Rng rng(seed);
    const auto& pal = palette.colors();
    std::vector<RgbColor> region_color(static_cast<std::size_t>(regions.count));
    for (auto& c : region_color) c = pal[rng.below(pal.size())];

    Raster out(w, h, colors::black);
    auto px = out.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) {
        if (regions.labels[i] >= 0) px[i] = region_color[static_cast<std::size_t>(regions.labels[i])];
    }
    return out;
}

Colorizer primitive_colorizer(PrimitivePalette palette) {
    return [palette = std::move(palette)](const Motif& m, std::uint64_t seed) {
        return primitive_colorize(m, palette, seed);
    };
}

Raster colorize_stage(const Motif& motif, const Colorizer& stage, std::uint64_t seed) {
    if (!stage) throw Error("no colorizer stage supplied");
    Raster out = stage(motif, seed);
    if (out.width() != motif.width() || out.height() != motif.height()) {
        throw Error("stage dimension mismatch");
    }
    return out;
}

Raster transfer_from_inspiration(const Raster& primitive, const Raster& inspiration,
                                 GamutTally& tally) {
    if (primitive.empty() || inspiration.empty()) throw Error("empty raster");
    return reinhard_transfer(primitive, channel_stats(inspiration), tally);
}

Raster transfer_from_inspiration(const Raster& primitive, const Raster& inspiration) {
    GamutTally ignored;
    return transfer_from_inspiration(primitive, inspiration, ignored);
}

GridDesign grid_quantize(const Raster& img, int n) {
    if (n <= 0) throw Error("grid size must be positive");
    if (img.width() < n || img.height() < n) throw Error("raster smaller than grid");

    const int cw = img.width() / n;
    const int ch = img.height() / n;
    std::vector<RgbColor> cells;
    cells.reserve(static_cast<std::size_t>(n) * n);
    for (int row = 0; row < n; ++row) {
        const int y0 = row * ch;
        const int y1 = row == n - 1 ? img.height() : y0 + ch;
        for (int col = 0; col < n; ++col) {
            const int x0 = col * cw;
            const int x1 = col == n - 1 ? img.width() : x0 + cw;
            // Offsets from the first pixel keep flat cells bit-exact.
            const RgbColor ref = img.at(x0, y0);
            double r = 0.0, g = 0.0, b = 0.0;
            for (int y = y0; y < y1; ++y) {
                for (int x = x0; x < x1; ++x) {
                    const RgbColor& p = img.at(x, y);
                    r += p.r - ref.r;
                    g += p.g - ref.g;
                    b += p.b - ref.b;
                }
            }
            const double count = static_cast<double>((y1 - y0) * (x1 - x0));
            cells.push_back({ref.r + r / count, ref.g + g / count, ref.b + b / count});
        }
    }
    return GridDesign(n, std::move(cells));
}

GridDesign run_ikat_pipeline(const Motif& motif, const Raster& inspiration,
                             const IkatOptions& options, GamutTally& tally) {
    const Raster primitive =
        colorize_stage(motif, primitive_colorizer(options.palette), options.seed);
    const Raster recolored = transfer_from_inspiration(primitive, inspiration, tally);
    return grid_quantize(recolored, options.grid);
}

GridDesign run_ikat_pipeline(const Motif& motif, const Raster& inspiration,
                             const IkatOptions& options) {
    GamutTally ignored;
    return run_ikat_pipeline(motif, inspiration, options, ignored);
}

}  // namespace craftgen::ikat
