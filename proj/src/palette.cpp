#include "craftgen/palette.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "craftgen/error.hpp"

namespace craftgen::palette {
namespace {

bool outranks(const WeightedColor& a, const WeightedColor& b) {
    if (a.prominence != b.prominence) return a.prominence > b.prominence;
    return a.color < b.color;
}

}  // namespace

Palette::Palette(std::vector<WeightedColor> entries, double merge_threshold)
    : entries_(std::move(entries)), merge_threshold_(merge_threshold) {
    if (entries_.empty()) throw Error("palette is empty");
    if (entries_.size() > 10) throw Error("palette holds more than ten colors");
}

std::vector<RgbColor> Palette::colors() const {
    std::vector<RgbColor> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.color);
    return out;
}

double prominence(const WeightedColor& c) {
    const HsvColor hsv = rgb_to_hsv(c.color);
    return hsv.v * (0.5 + 0.5 * hsv.s) * c.area_fraction;
}

std::vector<WeightedColor> quantize_colors(const Raster& img, int bins) {
    if (img.empty()) throw Error("empty raster");
    if (bins < 1) throw Error("bin count must be positive");

    // Sums are offsets from the first pixel in the bin, so a bin holding a
    // single flat color reproduces it bit-exactly.
    struct Bin {
        RgbColor ref;
        double r = 0.0, g = 0.0, b = 0.0;
        std::size_t count = 0;
    };
    const auto per = static_cast<std::size_t>(bins);
    std::vector<Bin> table(per * per * per);
    auto index = [&](double v) {
        const auto i = static_cast<std::ptrdiff_t>(std::floor(v * bins));
        return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, bins - 1));
    };
    for (const auto& p : img.pixels()) {
        Bin& bin = table[(index(p.r) * per + index(p.g)) * per + index(p.b)];
        if (bin.count == 0) bin.ref = p;
        bin.r += p.r - bin.ref.r;
        bin.g += p.g - bin.ref.g;
        bin.b += p.b - bin.ref.b;
        ++bin.count;
    }

    const double total = static_cast<double>(img.size());
    std::vector<WeightedColor> out;
    for (const auto& bin : table) {
        if (bin.count == 0) continue;
        const double n = static_cast<double>(bin.count);
        WeightedColor wc{{bin.ref.r + bin.r / n, bin.ref.g + bin.g / n, bin.ref.b + bin.b / n},
                         n / total, 0.0};
        wc.prominence = prominence(wc);
        out.push_back(wc);
    }
    return out;
}

std::vector<WeightedColor> merge_similar(std::vector<WeightedColor> colors, double threshold) {
    if (colors.empty()) throw Error("no colors to merge");
    if (!(threshold > 0.0)) throw Error("merge threshold must be positive");

    const std::size_t n = colors.size();
    std::vector<LabColor> lab;
    lab.reserve(n);
    for (const auto& c : colors) lab.push_back(rgb_to_lab(c.color));
    std::vector<double> dist(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            dist[i * n + j] = dist[j * n + i] = delta_e_ciede2000(lab[i], lab[j]);
        }
    }

    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<bool> alive(n, true);
    std::vector<std::size_t> nearest(n, n);
    std::vector<double> nearest_d(n, kInf);
    auto refresh = [&](std::size_t i) {
        nearest[i] = n;
        nearest_d[i] = kInf;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i || !alive[j]) continue;
            if (dist[i * n + j] < nearest_d[i]) {
                nearest_d[i] = dist[i * n + j];
                nearest[i] = j;
            }
        }
    };
    for (std::size_t i = 0; i < n; ++i) refresh(i);

    // The closest pair is the lowest i holding the global minimum together
    // with its nearest partner, which matches a lexicographic pair scan.
    while (true) {
        std::size_t a = n;
        double best = kInf;
        for (std::size_t i = 0; i < n; ++i) {
            if (alive[i] && nearest_d[i] < best) {
                best = nearest_d[i];
                a = i;
            }
        }
        if (a == n || !(best < threshold)) break;
        const std::size_t b = nearest[a];

        std::size_t keep = a, drop = b;
        if (outranks(colors[b], colors[a])) std::swap(keep, drop);
        colors[keep].area_fraction += colors[drop].area_fraction;
        colors[keep].prominence = prominence(colors[keep]);
        alive[drop] = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (alive[i] && (nearest[i] == drop || i == keep)) refresh(i);
        }
    }

    std::vector<WeightedColor> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (alive[i]) out.push_back(colors[i]);
    }
    return out;
}

int hue_bucket(const RgbColor& c, double bucket_degrees) {
    const HsvColor hsv = rgb_to_hsv(c);
    if (hsv.s == 0.0) return 0;
    return static_cast<int>(std::floor(hsv.h / bucket_degrees));
}

Palette extract_palette(const Raster& img, const PaletteOptions& options) {
    std::vector<WeightedColor> colors = quantize_colors(img, options.bins);

    const auto drop = static_cast<std::size_t>(
        std::floor(options.drop_fraction * static_cast<double>(colors.size())));
    if (drop > 0 && drop < colors.size()) {
        std::vector<std::size_t> order(colors.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            return colors[x].prominence < colors[y].prominence;
        });
        std::vector<bool> dropped(colors.size(), false);
        for (std::size_t k = 0; k < drop; ++k) dropped[order[k]] = true;
        std::vector<WeightedColor> kept;
        double total = 0.0;
        for (std::size_t i = 0; i < colors.size(); ++i) {
            if (!dropped[i]) {
                kept.push_back(colors[i]);
                total += colors[i].area_fraction;
            }
        }
        for (auto& c : kept) {
            c.area_fraction /= total;
            c.prominence = prominence(c);
        }
        colors = std::move(kept);
    }

    double threshold = options.initial_threshold;
    colors = merge_similar(std::move(colors), threshold);
    while (colors.size() > options.max_colors) {
        threshold += options.threshold_step;
        colors = merge_similar(std::move(colors), threshold);
    }

    std::stable_sort(colors.begin(), colors.end(), [&](const WeightedColor& x, const WeightedColor& y) {
        const int bx = hue_bucket(x.color, options.hue_bucket_degrees);
        const int by = hue_bucket(y.color, options.hue_bucket_degrees);
        if (bx != by) return bx < by;
        return x.prominence > y.prominence;
    });
    return Palette(std::move(colors), threshold);
}

}  // namespace craftgen::palette
