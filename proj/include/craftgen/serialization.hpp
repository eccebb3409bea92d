#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "craftgen/blockprint.hpp"
#include "craftgen/evaluation.hpp"
#include "craftgen/gbm.hpp"
#include "craftgen/ikat.hpp"
#include "craftgen/palette.hpp"

namespace craftgen::serial {

using nlohmann::json;

inline constexpr int kFormatVersion = 1;

json to_json(const blockprint::BlockDesign& block);
blockprint::BlockDesign block_design_from_json(const json& j);

json to_json(const blockprint::Pattern& pattern);
blockprint::Pattern pattern_from_json(const json& j);

/// Everything needed to re-render a block-print design bit for bit.
struct DesignDocument {
    blockprint::Pattern pattern;
    std::vector<RgbColor> palette;
    int px = 512;

    Raster render() const { return blockprint::render_pattern(pattern, palette, px); }
};

json to_json(const DesignDocument& doc);
DesignDocument design_document_from_json(const json& j);

/// {"colors": [{"hex", "area_fraction", "prominence"}...], "merge_threshold"}
json to_json(const palette::Palette& p);
/// Palette colors as stored (8-bit hex).
std::vector<RgbColor> palette_colors_from_json(const json& j);

/// Versioned model document: hyperparams, base_score, n_features, trees.
json to_json(const pruning::GbmModel& model);
pruning::GbmModel gbm_model_from_json(const json& j);

/// Header "row,col,hex_color" then n*n rows in row-major order.
std::string grid_to_csv(const ikat::GridDesign& grid);

/// Header row: a design-id column followed by judge ids; one 0/1 row per
/// design.
evaluation::AnnotationMatrix parse_annotation_csv(std::string_view text);

struct DatasetRow {
    std::string design;
    std::array<bool, 3> votes{};
    bool train = true;
};

/// Header "design,vote1,vote2,vote3,split"; split is "train" or "test".
std::vector<DatasetRow> parse_dataset_csv(std::string_view text);

}  // namespace craftgen::serial
