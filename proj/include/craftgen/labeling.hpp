#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace craftgen {

/// Result of 4-connected component labeling over a boolean mask.
struct ComponentLabels {
    int width = 0;
    int height = 0;
    int count = 0;
    /// -1 for pixels outside the mask, otherwise the component index
    /// (components numbered in raster-scan order of their first pixel).
    std::vector<int> labels;
};

ComponentLabels label_components(std::span<const std::uint8_t> mask, int width, int height);

}  // namespace craftgen
