#include "craftgen/raster.hpp"

#include <string>

#include "craftgen/error.hpp"

namespace craftgen {

Raster::Raster(int width, int height, RgbColor fill) : width_(width), height_(height) {
    if (width < 0 || height < 0) throw Error("negative raster dimensions");
    pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

Raster::Raster(int width, int height, std::vector<RgbColor> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (width < 0 || height < 0) throw Error("negative raster dimensions");
    const auto expected = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (pixels_.size() != expected) {
        throw Error("raster pixel count " + std::to_string(pixels_.size()) + " does not match " +
                    std::to_string(width) + "x" + std::to_string(height));
    }
}

}  // namespace craftgen
