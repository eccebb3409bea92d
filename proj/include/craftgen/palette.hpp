#pragma once

#include <vector>

#include "craftgen/color.hpp"
#include "craftgen/raster.hpp"

namespace craftgen::palette {

struct WeightedColor {
    RgbColor color;
    double area_fraction = 0.0;
    double prominence = 0.0;
};

/// Tunables for palette extraction. The defaults are the documented values.
struct PaletteOptions {
    int bins = 12;
    /// Share of quantized colors (lowest prominence first) dropped up front.
    double drop_fraction = 0.25;
    double initial_threshold = 10.0;
    double threshold_step = 2.0;
    std::size_t max_colors = 10;
    double hue_bucket_degrees = 30.0;
};

/// At most ten colors, ordered by 30-degree hue bucket and then by
/// descending prominence. Every pair is at least merge_threshold apart in
/// CIEDE2000.
class Palette {
public:
    Palette(std::vector<WeightedColor> entries, double merge_threshold);

    const std::vector<WeightedColor>& entries() const { return entries_; }
    std::vector<RgbColor> colors() const;
    std::size_t size() const { return entries_.size(); }
    double merge_threshold() const { return merge_threshold_; }

private:
    std::vector<WeightedColor> entries_;
    double merge_threshold_;
};

/// v * (0.5 + 0.5 s) * area_fraction with (s, v) from HSV.
double prominence(const WeightedColor& c);

/// Uniform per-channel binning. One entry per occupied bin (ascending bin
/// order) carrying the mean color of its pixels, its pixel share and its
/// prominence.
std::vector<WeightedColor> quantize_colors(const Raster& img, int bins = 12);

/// Repeatedly takes the closest pair under threshold and folds the less
/// prominent member into the more prominent one (area fractions add,
/// prominence is recomputed). Equal prominence keeps the lexicographically
/// smaller RGB. Survivors keep their input order.
std::vector<WeightedColor> merge_similar(std::vector<WeightedColor> colors, double threshold);

/// Hue bucket index used for palette ordering.
int hue_bucket(const RgbColor& c, double bucket_degrees = 30.0);

Palette extract_palette(const Raster& img, const PaletteOptions& options = {});

}  // namespace craftgen::palette
