#include "craftgen/serialization.hpp"

#include <cstdint>

#include "craftgen/error.hpp"
#include "craftgen/io.hpp"

namespace craftgen::serial {
namespace {

using namespace craftgen::blockprint;

template <typename T>
T field(const json& j, const char* key) {
    if (!j.contains(key)) throw Error(std::string("missing field \"") + key + "\"");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw Error(std::string("malformed field \"") + key + "\"");
    }
}

void check_version(const json& j, const char* what) {
    const int v = field<int>(j, "version");
    if (v != kFormatVersion) {
        throw Error(std::string("unsupported ") + what + " version " + std::to_string(v));
    }
}

json edge_point(const EdgePoint& p) { return {{"edge", p.edge}, {"t", p.t}}; }

EdgePoint edge_point_from(const json& j) { return {field<int>(j, "edge"), field<double>(j, "t")}; }

bool parse_vote(const std::string& cell) {
    if (cell == "1") return true;
    if (cell == "0") return false;
    throw Error("vote cells must be 0 or 1, got \"" + cell + "\"");
}

}  // namespace

json to_json(const BlockDesign& block) {
    json chords = json::array();
    for (const auto& c : block.chords()) {
        chords.push_back({{"region", c.region},
                          {"from", edge_point(c.from)},
                          {"to", edge_point(c.to)},
                          {"kind", c.kind == ChordKind::straight ? "straight" : "curved"},
                          {"curvature", c.curvature}});
    }
    return {{"shape",
             {{"kind", std::string(to_string(block.shape().kind()))}, {"side", block.shape().side()}}},
            {"style", std::string(to_string(block.style()))},
            {"seed", block.seed()},
            {"chords", std::move(chords)}};
}

BlockDesign block_design_from_json(const json& j) {
    const json& shape = j.at("shape");
    BaseShape base(shape_kind_from_string(field<std::string>(shape, "kind")),
                   field<double>(shape, "side"));
    std::vector<Chord> chords;
    for (const auto& c : j.at("chords")) {
        Chord chord;
        chord.region = field<int>(c, "region");
        chord.from = edge_point_from(c.at("from"));
        chord.to = edge_point_from(c.at("to"));
        const auto kind = field<std::string>(c, "kind");
        if (kind == "straight") {
            chord.kind = ChordKind::straight;
        } else if (kind == "curved") {
            chord.kind = ChordKind::curved;
        } else {
            throw Error("unknown chord kind: " + kind);
        }
        chord.curvature = field<double>(c, "curvature");
        chords.push_back(chord);
    }
    return BlockDesign(base, divide_style_from_string(field<std::string>(j, "style")),
                       field<std::uint64_t>(j, "seed"), std::move(chords));
}

json to_json(const Pattern& pattern) {
    return {{"block", to_json(pattern.block())},
            {"tiling",
             {{"rows", pattern.rows()},
              {"cols", pattern.cols()},
              {"rotation_policy",
               {{"mode", std::string(to_string(pattern.policy().mode))},
                {"fixed_degrees", pattern.policy().fixed_degrees}}},
              {"seed", pattern.seed()},
              {"rotations", pattern.rotations()}}}};
}

Pattern pattern_from_json(const json& j) {
    const json& tiling = j.at("tiling");
    const json& policy = tiling.at("rotation_policy");
    RotationPolicy rp{rotation_mode_from_string(field<std::string>(policy, "mode")),
                      field<int>(policy, "fixed_degrees")};
    return Pattern(block_design_from_json(j.at("block")), field<int>(tiling, "rows"),
                   field<int>(tiling, "cols"), rp, field<std::uint64_t>(tiling, "seed"),
                   field<std::vector<int>>(tiling, "rotations"));
}

json to_json(const DesignDocument& doc) {
    json colors = json::array();
    for (const auto& c : doc.palette) colors.push_back(to_hex(c));
    json out = to_json(doc.pattern);
    out["version"] = kFormatVersion;
    out["palette"] = std::move(colors);
    out["px"] = doc.px;
    return out;
}

DesignDocument design_document_from_json(const json& j) {
    check_version(j, "design");
    std::vector<RgbColor> palette;
    for (const auto& c : j.at("palette")) palette.push_back(from_hex(c.get<std::string>()));
    return {pattern_from_json(j), std::move(palette), field<int>(j, "px")};
}

json to_json(const palette::Palette& p) {
    json colors = json::array();
    for (const auto& e : p.entries()) {
        colors.push_back({{"hex", to_hex(e.color)},
                          {"area_fraction", e.area_fraction},
                          {"prominence", e.prominence}});
    }
    return {{"version", kFormatVersion},
            {"merge_threshold", p.merge_threshold()},
            {"colors", std::move(colors)}};
}

std::vector<RgbColor> palette_colors_from_json(const json& j) {
    std::vector<RgbColor> out;
    for (const auto& c : j.at("colors")) out.push_back(from_hex(field<std::string>(c, "hex")));
    if (out.empty()) throw Error("palette is empty");
    return out;
}

json to_json(const pruning::GbmModel& model) {
    const auto& hp = model.hyperparams;
    json trees = json::array();
    for (const auto& tree : model.trees) {
        json nodes = json::array();
        for (const auto& n : tree.nodes) {
            if (n.is_leaf()) {
                nodes.push_back({{"leaf", n.value}, {"samples", n.samples}});
            } else {
                nodes.push_back({{"feature", n.feature},
                                 {"threshold", n.threshold},
                                 {"left", n.left},
                                 {"right", n.right},
                                 {"samples", n.samples}});
            }
        }
        trees.push_back({{"nodes", std::move(nodes)}});
    }
    return {{"format", "craftgen-gbm"},
            {"version", kFormatVersion},
            {"hyperparams",
             {{"learning_rate", hp.learning_rate},
              {"max_leaves", hp.max_leaves},
              {"min_samples_leaf", hp.min_samples_leaf},
              {"n_trees", hp.n_trees},
              {"l2", hp.l2},
              {"subsample", hp.subsample}}},
            {"n_features", model.n_features},
            {"base_score", model.base_score},
            {"trees", std::move(trees)}};
}

pruning::GbmModel gbm_model_from_json(const json& j) {
    if (field<std::string>(j, "format") != "craftgen-gbm") throw Error("not a craftgen model file");
    check_version(j, "model");
    pruning::GbmModel model;
    const json& hp = j.at("hyperparams");
    model.hyperparams.learning_rate = field<double>(hp, "learning_rate");
    model.hyperparams.max_leaves = field<int>(hp, "max_leaves");
    model.hyperparams.min_samples_leaf = field<int>(hp, "min_samples_leaf");
    model.hyperparams.n_trees = field<int>(hp, "n_trees");
    model.hyperparams.l2 = field<double>(hp, "l2");
    model.hyperparams.subsample = field<double>(hp, "subsample");
    model.hyperparams.validate();
    model.n_features = field<std::size_t>(j, "n_features");
    model.base_score = field<double>(j, "base_score");
    for (const auto& t : j.at("trees")) {
        pruning::RegressionTree tree;
        for (const auto& n : t.at("nodes")) {
            pruning::TreeNode node;
            node.samples = field<std::size_t>(n, "samples");
            if (n.contains("leaf")) {
                node.value = field<double>(n, "leaf");
            } else {
                node.feature = field<int>(n, "feature");
                node.threshold = field<double>(n, "threshold");
                node.left = field<int>(n, "left");
                node.right = field<int>(n, "right");
            }
            tree.nodes.push_back(node);
        }
        // Children must point forward so evaluation terminates.
        const auto size = static_cast<int>(tree.nodes.size());
        for (int i = 0; i < size; ++i) {
            const auto& node = tree.nodes[static_cast<std::size_t>(i)];
            if (node.is_leaf()) continue;
            if (node.left <= i || node.right <= i || node.left >= size || node.right >= size ||
                node.feature >= static_cast<int>(model.n_features)) {
                throw Error("malformed tree in model file");
            }
        }
        if (tree.nodes.empty()) throw Error("malformed tree in model file");
        model.trees.push_back(std::move(tree));
    }
    return model;
}

std::string grid_to_csv(const ikat::GridDesign& grid) {
    std::string out = "row,col,hex_color\n";
    out.reserve(out.size() + static_cast<std::size_t>(grid.n()) * grid.n() * 20);
    for (int r = 0; r < grid.n(); ++r) {
        for (int c = 0; c < grid.n(); ++c) {
            out += std::to_string(r);
            out += ',';
            out += std::to_string(c);
            out += ',';
            out += to_hex(grid.cell(r, c));
            out += '\n';
        }
    }
    return out;
}

evaluation::AnnotationMatrix parse_annotation_csv(std::string_view text) {
    const auto lines = io::csv_lines(text);
    if (lines.size() < 2) throw Error("annotation CSV needs a header and at least one design row");
    const auto header = io::split_csv_line(lines[0]);
    if (header.size() < 2) throw Error("annotation CSV needs at least one judge column");
    const std::size_t judges = header.size() - 1;
    std::vector<std::vector<bool>> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = io::split_csv_line(lines[i]);
        if (cells.size() != judges + 1) {
            throw Error("annotation row " + std::to_string(i) + " has " +
                        std::to_string(cells.size()) + " cells, expected " +
                        std::to_string(judges + 1));
        }
        std::vector<bool> row;
        for (std::size_t k = 1; k < cells.size(); ++k) row.push_back(parse_vote(cells[k]));
        rows.push_back(std::move(row));
    }
    return evaluation::AnnotationMatrix::from_rows(rows);
}

std::vector<DatasetRow> parse_dataset_csv(std::string_view text) {
    const auto lines = io::csv_lines(text);
    if (lines.empty()) throw Error("dataset CSV is empty");
    const auto header = io::split_csv_line(lines[0]);
    const std::vector<std::string> expected{"design", "vote1", "vote2", "vote3", "split"};
    if (header != expected) throw Error("dataset CSV header must be design,vote1,vote2,vote3,split");
    std::vector<DatasetRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = io::split_csv_line(lines[i]);
        if (cells.size() != expected.size()) {
            throw Error("dataset row " + std::to_string(i) + " has the wrong number of cells");
        }
        DatasetRow row;
        row.design = cells[0];
        for (int k = 0; k < 3; ++k) row.votes[static_cast<std::size_t>(k)] = parse_vote(cells[1 + k]);
        if (cells[4] == "train") {
            row.train = true;
        } else if (cells[4] == "test") {
            row.train = false;
        } else {
            throw Error("dataset split must be train or test, got \"" + cells[4] + "\"");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace craftgen::serial
