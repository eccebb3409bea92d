#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "craftgen/color.hpp"

namespace craftgen {

/// Row-major RGB image. A default-constructed raster is empty (0x0).
class Raster {
public:
    Raster() = default;
    Raster(int width, int height, RgbColor fill = colors::black);
    Raster(int width, int height, std::vector<RgbColor> pixels);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return pixels_.size(); }
    bool empty() const { return pixels_.empty(); }

    RgbColor& at(int x, int y) { return pixels_[index(x, y)]; }
    const RgbColor& at(int x, int y) const { return pixels_[index(x, y)]; }

    std::span<RgbColor> pixels() { return pixels_; }
    std::span<const RgbColor> pixels() const { return pixels_; }

    friend bool operator==(const Raster&, const Raster&) = default;

private:
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<RgbColor> pixels_;
};

}  // namespace craftgen
