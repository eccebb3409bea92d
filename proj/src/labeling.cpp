#include "craftgen/labeling.hpp"

#include "craftgen/error.hpp"

namespace craftgen {

ComponentLabels label_components(std::span<const std::uint8_t> mask, int width, int height) {
    const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (mask.size() != n) throw Error("mask size does not match dimensions");

    ComponentLabels out{width, height, 0, std::vector<int>(n, -1)};
    std::vector<std::size_t> stack;
    for (std::size_t seed = 0; seed < n; ++seed) {
        if (!mask[seed] || out.labels[seed] >= 0) continue;
        const int label = out.count++;
        out.labels[seed] = label;
        stack.push_back(seed);
        while (!stack.empty()) {
            const std::size_t i = stack.back();
            stack.pop_back();
            const int x = static_cast<int>(i % static_cast<std::size_t>(width));
            const int y = static_cast<int>(i / static_cast<std::size_t>(width));
            auto visit = [&](int nx, int ny) {
                if (nx < 0 || ny < 0 || nx >= width || ny >= height) return;
                const std::size_t j = static_cast<std::size_t>(ny) * width + nx;
                if (mask[j] && out.labels[j] < 0) {
                    out.labels[j] = label;
                    stack.push_back(j);
                }
            };
            visit(x - 1, y);
            visit(x + 1, y);
            visit(x, y - 1);
            visit(x, y + 1);
        }
    }
    return out;
}

}  // namespace craftgen
