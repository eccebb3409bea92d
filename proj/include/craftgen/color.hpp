#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <string>
#include <string_view>

namespace craftgen {

class Raster;

/// Gamma-encoded sRGB, each channel in [0, 1].
struct RgbColor {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;

    friend auto operator<=>(const RgbColor&, const RgbColor&) = default;
};

/// CIELAB relative to D65. L in [0, 100]; a and b nominally [-128, 127].
struct LabColor {
    double l = 0.0;
    double a = 0.0;
    double b = 0.0;

    friend bool operator==(const LabColor&, const LabColor&) = default;
};

/// Hexcone HSV. h in degrees [0, 360), s and v in [0, 1].
struct HsvColor {
    double h = 0.0;
    double s = 0.0;
    double v = 0.0;
};

/// Per-channel LAB mean and population standard deviation.
struct ChannelStats {
    std::array<double, 3> mean{};
    std::array<double, 3> std{};
};

/// Counts clamping performed while mapping LAB back into the sRGB cube.
struct GamutTally {
    std::size_t clipped_pixels = 0;
    std::size_t clipped_channels = 0;
};

namespace colors {
inline constexpr RgbColor black{0.0, 0.0, 0.0};
inline constexpr RgbColor white{1.0, 1.0, 1.0};
inline constexpr RgbColor red{1.0, 0.0, 0.0};
inline constexpr RgbColor blue{0.0, 0.0, 1.0};
inline constexpr RgbColor yellow{1.0, 1.0, 0.0};
}  // namespace colors

LabColor rgb_to_lab(const RgbColor& c);

/// Out-of-gamut channels are clamped to [0, 1].
RgbColor lab_to_rgb(const LabColor& c);
RgbColor lab_to_rgb(const LabColor& c, GamutTally& tally);

/// Grayscale inputs yield s = 0 and h = 0.
HsvColor rgb_to_hsv(const RgbColor& c);

/// HSL lightness, (max + min) / 2.
double hsl_lightness(const RgbColor& c);

/// CIEDE2000 colour difference with unit weighting factors.
double delta_e_ciede2000(const LabColor& x, const LabColor& y);

/// Throws Error("empty raster") on an empty image.
ChannelStats channel_stats(const Raster& img);

/// Imposes target_stats on the LAB channels of source. A source channel with
/// zero spread maps every pixel to the target mean.
Raster reinhard_transfer(const Raster& source, const ChannelStats& target_stats);
Raster reinhard_transfer(const Raster& source, const ChannelStats& target_stats,
                         GamutTally& tally);

/// "#rrggbb", channels rounded to 8 bits.
std::string to_hex(const RgbColor& c);
RgbColor from_hex(std::string_view hex);

}  // namespace craftgen
