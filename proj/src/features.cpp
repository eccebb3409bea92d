#include "craftgen/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "craftgen/error.hpp"

namespace craftgen::pruning {
namespace {

double hue_distance(double a, double b) {
    const double d = std::fmod(std::abs(a - b), 360.0);
    return std::min(d, 360.0 - d);
}

double circular_mean(std::span<const double> hues) {
    double sx = 0.0, sy = 0.0;
    for (double h : hues) {
        const double r = h * std::numbers::pi / 180.0;
        sx += std::cos(r);
        sy += std::sin(r);
    }
    double m = std::atan2(sy, sx) * 180.0 / std::numbers::pi;
    return m < 0.0 ? m + 360.0 : m;
}

// Gaps between consecutive cluster centers around the wheel must all sit
// within tolerance of 360/k.
bool evenly_spaced(std::vector<double> centers, double tolerance) {
    std::sort(centers.begin(), centers.end());
    const double target = 360.0 / static_cast<double>(centers.size());
    for (std::size_t i = 0; i < centers.size(); ++i) {
        const double next = i + 1 < centers.size() ? centers[i + 1] : centers[0] + 360.0;
        if (std::abs((next - centers[i]) - target) > tolerance) return false;
    }
    return true;
}

std::map<RgbColor, std::size_t> distinct_colors(const Raster& img) {
    std::map<RgbColor, std::size_t> counts;
    for (const auto& p : img.pixels()) {
        ++counts[p];
        if (counts.size() > kFeatureConfig.max_flat_colors) throw Error("not a flat-fill design");
    }
    return counts;
}

}  // namespace

std::vector<ColorArea> area_fractions(const Raster& img) {
    if (img.empty()) throw Error("empty raster");
    const auto counts = distinct_colors(img);
    const double total = static_cast<double>(img.size());
    std::vector<ColorArea> out;
    for (const auto& [color, n] : counts) {
        out.push_back({color, n, static_cast<double>(n) / total});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const ColorArea& a, const ColorArea& b) { return a.pixels > b.pixels; });
    return out;
}

bool darkness_class(const RgbColor& c, const FeatureConfig& cfg) {
    const double lightness = hsl_lightness(c);
    const HsvColor hsv = rgb_to_hsv(c);
    const bool blue = hsv.s > 0.0 && hsv.h >= cfg.blue_hue_low && hsv.h <= cfg.blue_hue_high;
    return lightness < (blue ? cfg.dark_lightness_blue : cfg.dark_lightness);
}

double dullness_score(std::span<const ColorArea> colors) {
    if (colors.empty()) throw Error("dullness needs at least one color");
    double acc = 0.0, weight = 0.0;
    for (const auto& c : colors) {
        const HsvColor hsv = rgb_to_hsv(c.color);
        acc += c.fraction * (1.0 - hsv.s * hsv.v);
        weight += c.fraction;
    }
    return weight > 0.0 ? std::clamp(acc / weight, 0.0, 1.0) : 0.0;
}

std::string_view to_string(Harmony h) {
    switch (h) {
        case Harmony::monochromatic: return "monochromatic";
        case Harmony::analogous: return "analogous";
        case Harmony::complementary: return "complementary";
        case Harmony::triadic: return "triadic";
        case Harmony::tetradic: return "tetradic";
        case Harmony::none: return "none";
    }
    return "none";
}

Harmony harmony_type(std::span<const ColorArea> colors, const FeatureConfig& cfg) {
    if (colors.empty()) throw Error("harmony needs at least one color");
    std::vector<double> hues;
    for (const auto& c : colors) {
        const HsvColor hsv = rgb_to_hsv(c.color);
        if (hsv.s >= cfg.achromatic_saturation) hues.push_back(hsv.h);
    }
    if (hues.empty()) return Harmony::monochromatic;

    double spread = 0.0;
    for (std::size_t i = 0; i < hues.size(); ++i) {
        for (std::size_t j = i + 1; j < hues.size(); ++j) {
            spread = std::max(spread, hue_distance(hues[i], hues[j]));
        }
    }
    if (spread <= cfg.monochromatic_spread) return Harmony::monochromatic;
    if (spread <= cfg.analogous_spread) return Harmony::analogous;

    std::sort(hues.begin(), hues.end());
    const std::size_t m = hues.size();
    std::vector<std::size_t> cuts;  // cluster starts after a wide gap
    for (std::size_t i = 0; i < m; ++i) {
        const double next = i + 1 < m ? hues[i + 1] : hues[0] + 360.0;
        if (next - hues[i] > cfg.cluster_gap) cuts.push_back((i + 1) % m);
    }
    if (cuts.empty()) return Harmony::none;

    std::vector<double> centers;
    for (std::size_t k = 0; k < cuts.size(); ++k) {
        const std::size_t begin = cuts[k];
        const std::size_t end = cuts[(k + 1) % cuts.size()];
        std::vector<double> members;
        std::size_t i = begin;
        do {
            members.push_back(hues[i]);
            i = (i + 1) % m;
        } while (i != end);
        centers.push_back(circular_mean(members));
    }

    switch (centers.size()) {
        case 2:
            if (std::abs(hue_distance(centers[0], centers[1]) - 180.0) <= cfg.harmony_tolerance) {
                return Harmony::complementary;
            }
            break;
        case 3:
            if (evenly_spaced(centers, cfg.harmony_tolerance)) return Harmony::triadic;
            break;
        case 4:
            if (evenly_spaced(centers, cfg.harmony_tolerance)) return Harmony::tetradic;
            break;
        default:
            break;
    }
    return Harmony::none;
}

double global_contrast(const Raster& img) {
    if (img.empty()) throw Error("empty raster");
    const auto counts = distinct_colors(img);
    if (counts.size() < 2) return 0.0;

    std::vector<RgbColor> palette;
    for (const auto& entry : counts) palette.push_back(entry.first);
    auto index_of = [&](const RgbColor& c) {
        return static_cast<std::size_t>(std::lower_bound(palette.begin(), palette.end(), c) -
                                        palette.begin());
    };
    std::vector<std::size_t> idx(img.size());
    auto px = img.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) idx[i] = index_of(px[i]);

    std::set<std::pair<std::size_t, std::size_t>> pairs;
    const auto w = static_cast<std::size_t>(img.width());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        auto note = [&](std::size_t j) {
            if (idx[i] != idx[j]) pairs.insert(std::minmax(idx[i], idx[j]));
        };
        if ((i % w) + 1 < w) note(i + 1);
        if (i + w < idx.size()) note(i + w);
    }
    if (pairs.empty()) return 0.0;
    double acc = 0.0;
    for (const auto& [a, b] : pairs) {
        acc += std::abs(rgb_to_lab(palette[a]).l - rgb_to_lab(palette[b]).l);
    }
    return std::clamp(acc / static_cast<double>(pairs.size()), 0.0, 100.0);
}

std::vector<double> FeatureVector::values() const {
    std::vector<double> v;
    v.reserve(kDimension);
    v.insert(v.end(), area_fractions.begin(), area_fractions.end());
    v.push_back(dark_flags[0] ? 1.0 : 0.0);
    v.push_back(dark_flags[1] ? 1.0 : 0.0);
    v.push_back(dullness);
    for (std::size_t h = 0; h < kHarmonyCount; ++h) {
        v.push_back(static_cast<std::size_t>(harmony) == h ? 1.0 : 0.0);
    }
    v.push_back(global_contrast);
    return v;
}

FeatureVector extract_features(const Raster& img) {
    const auto areas = area_fractions(img);
    FeatureVector f;
    for (std::size_t i = 0; i < areas.size() && i < FeatureVector::kTopColors; ++i) {
        f.area_fractions[i] = areas[i].fraction;
    }
    for (std::size_t i = 0; i < 2 && i < areas.size(); ++i) {
        f.dark_flags[i] = darkness_class(areas[i].color);
    }
    f.dullness = dullness_score(areas);
    f.harmony = harmony_type(areas);
    f.global_contrast = global_contrast(img);
    return f;
}

}  // namespace craftgen::pruning
