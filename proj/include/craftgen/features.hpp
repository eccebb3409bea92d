#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "craftgen/color.hpp"
#include "craftgen/raster.hpp"

namespace craftgen::pruning {

/// Thresholds behind the qualitative feature descriptions, kept in one place.
struct FeatureConfig {
    double dark_lightness = 0.35;
    /// Blues read darker, so their lightness cutoff is relaxed.
    double dark_lightness_blue = 0.45;
    double blue_hue_low = 200.0;
    double blue_hue_high = 280.0;
    /// Colors below this HSV saturation carry no usable hue.
    double achromatic_saturation = 0.15;
    double monochromatic_spread = 15.0;
    double analogous_spread = 40.0;
    /// Sorted hues further apart than this start a new hue cluster.
    double cluster_gap = 30.0;
    double harmony_tolerance = 20.0;
    std::size_t max_flat_colors = 32;
};

inline constexpr FeatureConfig kFeatureConfig{};

struct ColorArea {
    RgbColor color;
    std::size_t pixels = 0;
    double fraction = 0.0;
};

/// Exact per-color pixel shares, largest first (ties by RGB order).
/// Throws Error("not a flat-fill design") above 32 distinct colors.
std::vector<ColorArea> area_fractions(const Raster& img);

bool darkness_class(const RgbColor& c, const FeatureConfig& cfg = kFeatureConfig);

/// Area-weighted mean of 1 - s*v.
double dullness_score(std::span<const ColorArea> colors);

enum class Harmony { monochromatic, analogous, complementary, triadic, tetradic, none };
inline constexpr std::size_t kHarmonyCount = 6;

std::string_view to_string(Harmony h);

Harmony harmony_type(std::span<const ColorArea> colors, const FeatureConfig& cfg = kFeatureConfig);

/// Mean |delta L| over the distinct color pairs that touch (4-adjacency).
/// Zero for a single-color image.
double global_contrast(const Raster& img);

struct FeatureVector {
    static constexpr std::size_t kTopColors = 10;
    static constexpr std::size_t kDimension = kTopColors + 2 + 1 + kHarmonyCount + 1;

    std::array<double, kTopColors> area_fractions{};
    std::array<bool, 2> dark_flags{};
    double dullness = 0.0;
    Harmony harmony = Harmony::none;
    double global_contrast = 0.0;

    /// Flat numeric encoding: fractions, dark flags, dullness, one-hot
    /// harmony, contrast.
    std::vector<double> values() const;

    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

FeatureVector extract_features(const Raster& img);

}  // namespace craftgen::pruning
