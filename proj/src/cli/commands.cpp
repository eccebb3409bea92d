#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "craftgen/blockprint.hpp"
#include "craftgen/cli.hpp"
#include "craftgen/error.hpp"
#include "craftgen/evaluation.hpp"
#include "craftgen/features.hpp"
#include "craftgen/gbm.hpp"
#include "craftgen/ikat.hpp"
#include "craftgen/io.hpp"
#include "craftgen/palette.hpp"
#include "craftgen/rng.hpp"
#include "craftgen/serialization.hpp"

namespace craftgen::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string numbered(const char* stem, std::size_t i, const char* ext) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%04zu.%s", stem, i, ext);
    return buf;
}

// Resolved config goes to stdout and next to the outputs.
void echo_config(const RunConfig& cfg, std::ostream& out, bool to_disk) {
    const json j = to_json(cfg);
    out << "config " << j.dump() << '\n';
    if (!to_disk) return;
    fs::create_directories(cfg.out_dir);
    io::write_text(fs::path(cfg.out_dir) / "run_config.json", j.dump(2) + "\n");
}

std::vector<RgbColor> snapped(const std::vector<RgbColor>& colors) {
    std::vector<RgbColor> out;
    for (const auto& c : colors) out.push_back(from_hex(to_hex(c)));
    return out;
}

pruning::GbmModel load_model(const std::string& path) {
    try {
        return serial::gbm_model_from_json(json::parse(io::read_text(path)));
    } catch (const json::exception& e) {
        throw Error("cannot parse model " + path + ": " + e.what());
    }
}

serial::DesignDocument load_design(const fs::path& path) {
    try {
        return serial::design_document_from_json(json::parse(io::read_text(path)));
    } catch (const json::exception& e) {
        throw Error("cannot parse design " + path.string() + ": " + e.what());
    }
}

int cmd_generate_ikat(const RunConfig& cfg, std::ostream& out) {
    const ikat::Motif motif(io::read_png(cfg.motif), cfg.motif_threshold);
    const Raster inspiration = io::read_png(cfg.inspiration);

    struct Result {
        std::uint64_t seed = 0;
        ikat::GridDesign grid{1, {RgbColor{}}};
        GamutTally tally;
    };
    std::vector<Result> results(static_cast<std::size_t>(cfg.count));
    parallel_for(results.size(), [&](std::size_t i) {
        ikat::IkatOptions opts;
        opts.seed = cfg.seed + i;
        opts.grid = cfg.grid;
        Result& r = results[i];
        r.seed = opts.seed;
        r.grid = ikat::run_ikat_pipeline(motif, inspiration, opts, r.tally);
    });

    fs::create_directories(cfg.out_dir);
    for (const auto& r : results) {
        const std::string stem = "ikat_" + std::to_string(r.seed);
        io::write_png(fs::path(cfg.out_dir) / (stem + ".png"), r.grid.render(cfg.cell_px));
        io::write_text(fs::path(cfg.out_dir) / (stem + ".csv"), serial::grid_to_csv(r.grid));
        out << "seed " << r.seed << " clipped_pixels " << r.tally.clipped_pixels
            << " clipped_channels " << r.tally.clipped_channels << " -> " << stem << ".png\n";
    }
    echo_config(cfg, out, true);
    return 0;
}

blockprint::BlockDesign make_block(const RunConfig& cfg, std::uint64_t seed) {
    const blockprint::BaseShape shape(blockprint::shape_kind_from_string(cfg.shape));
    if (blockprint::divide_style_from_string(cfg.style) == blockprint::DivideStyle::recursive_divide) {
        return blockprint::recursive_divide(shape, cfg.depth, seed);
    }
    return blockprint::block_divide(shape, cfg.chords, seed, cfg.curves);
}

int cmd_generate_blockprint(const RunConfig& cfg, std::ostream& out) {
    std::optional<pruning::GbmModel> model;
    if (cfg.prune) model = load_model(cfg.model);
    const Raster inspiration = io::read_png(cfg.inspiration);
    const palette::Palette pal = palette::extract_palette(inspiration);
    const auto colors = snapped(pal.colors());

    const blockprint::RotationPolicy policy{blockprint::rotation_mode_from_string(cfg.rotation),
                                            cfg.rotation_degrees};
    struct Result {
        std::optional<serial::DesignDocument> doc;
        Raster image;
        double score = 1.0;
    };
    std::vector<Result> results(static_cast<std::size_t>(cfg.count));
    parallel_for(results.size(), [&](std::size_t i) {
        const std::uint64_t s = mix_seed(cfg.seed, i);
        auto pattern = blockprint::tile_pattern(make_block(cfg, mix_seed(s, 1)), cfg.rows, cfg.cols,
                                                policy, mix_seed(s, 2));
        Result& r = results[i];
        r.doc = serial::DesignDocument{std::move(pattern), colors, cfg.px};
        r.image = r.doc->render();
        if (model) r.score = pruning::predict(*model, pruning::extract_features(r.image));
    });

    fs::create_directories(cfg.out_dir);
    io::write_text(fs::path(cfg.out_dir) / "palette.json", serial::to_json(pal).dump(2) + "\n");
    std::ostringstream log;
    log << "design,score,kept\n";
    std::size_t kept = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        const bool keep = !model || r.score >= cfg.threshold;
        log << numbered("design", i, "json") << ',' << r.score << ',' << (keep ? 1 : 0) << '\n';
        if (!keep) {
            out << "discard " << numbered("design", i, "json") << " score " << r.score << '\n';
            continue;
        }
        io::write_png(fs::path(cfg.out_dir) / numbered("design", i, "png"), r.image);
        io::write_text(fs::path(cfg.out_dir) / numbered("design", i, "json"),
                       serial::to_json(*r.doc).dump(2) + "\n");
        out << "design " << numbered("design", i, "png") << " seed " << r.doc->pattern.block().seed()
            << '\n';
        ++kept;
    }
    if (model) io::write_text(fs::path(cfg.out_dir) / "prune_log.csv", log.str());
    out << "palette " << colors.size() << " colors, kept " << kept << " of " << results.size()
        << " designs\n";
    echo_config(cfg, out, true);
    return 0;
}

int cmd_extract_palette(const RunConfig& cfg, std::ostream& out) {
    const auto pal = palette::extract_palette(io::read_png(cfg.inspiration));
    fs::create_directories(cfg.out_dir);
    io::write_text(fs::path(cfg.out_dir) / "palette.json", serial::to_json(pal).dump(2) + "\n");
    for (const auto& e : pal.entries()) {
        out << to_hex(e.color) << ' ' << e.area_fraction << '\n';
    }
    echo_config(cfg, out, true);
    return 0;
}

int cmd_train_pruner(const RunConfig& cfg, std::ostream& out) {
    const fs::path csv(cfg.dataset);
    const auto rows = serial::parse_dataset_csv(io::read_text(csv));
    if (rows.empty()) throw Error("dataset " + cfg.dataset + " has no rows");

    std::vector<pruning::LabeledDesign> labeled(rows.size());
    parallel_for(rows.size(), [&](std::size_t i) {
        fs::path p(rows[i].design);
        if (p.is_relative()) p = csv.parent_path() / p;
        labeled[i].features = pruning::extract_features(load_design(p).render());
        labeled[i].votes = rows[i].votes;
    });

    std::vector<std::vector<double>> train_x, test_x;
    std::vector<bool> train_y, test_y;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto& xs = rows[i].train ? train_x : test_x;
        auto& ys = rows[i].train ? train_y : test_y;
        xs.push_back(labeled[i].features.values());
        ys.push_back(labeled[i].label());
    }
    if (train_x.empty()) throw Error("dataset has no train rows");

    const pruning::GbmHyperparams hp{cfg.learning_rate, cfg.max_leaves, cfg.min_samples_leaf,
                                     cfg.n_trees,       1.0,            cfg.subsample};
    const auto model = pruning::train_gbm(train_x, train_y, hp, cfg.seed);

    const fs::path model_path = cfg.model.empty() ? fs::path(cfg.out_dir) / "model.json" : fs::path(cfg.model);
    if (model_path.has_parent_path()) fs::create_directories(model_path.parent_path());
    io::write_text(model_path, serial::to_json(model).dump(2) + "\n");

    out << "train n " << train_x.size() << " log_loss " << pruning::log_loss(model, train_x, train_y)
        << " accuracy " << pruning::accuracy(model, train_x, train_y) << '\n';
    if (test_x.empty()) {
        out << "test n 0\n";
    } else {
        out << "test n " << test_x.size() << " log_loss " << pruning::log_loss(model, test_x, test_y)
            << " accuracy " << pruning::accuracy(model, test_x, test_y) << '\n';
    }
    out << "model " << model_path.string() << '\n';
    RunConfig echoed = cfg;
    echoed.model = model_path.string();
    echo_config(echoed, out, true);
    return 0;
}

int cmd_prune(const RunConfig& cfg, std::ostream& out) {
    const auto model = load_model(cfg.model);
    std::vector<double> scores(cfg.designs.size());
    parallel_for(cfg.designs.size(), [&](std::size_t i) {
        scores[i] = pruning::predict(model, pruning::extract_features(load_design(cfg.designs[i]).render()));
    });
    std::ostringstream log;
    log << "design,score,kept\n";
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool keep = scores[i] >= cfg.threshold;
        log << cfg.designs[i] << ',' << scores[i] << ',' << (keep ? 1 : 0) << '\n';
        out << (keep ? "keep " : "discard ") << cfg.designs[i] << " score " << scores[i] << '\n';
    }
    fs::create_directories(cfg.out_dir);
    io::write_text(fs::path(cfg.out_dir) / "prune_log.csv", log.str());
    echo_config(cfg, out, true);
    return 0;
}

int cmd_evaluate(const RunConfig& cfg, std::ostream& out) {
    std::vector<std::pair<std::string, evaluation::AnnotationMatrix>> entries;
    for (const auto& arg : cfg.annotations) {
        // "label=path" or a bare path labelled by its file stem.
        const auto eq = arg.find('=');
        const std::string path = eq == std::string::npos ? arg : arg.substr(eq + 1);
        const std::string label = eq == std::string::npos ? fs::path(path).stem().string() : arg.substr(0, eq);
        entries.emplace_back(label, serial::parse_annotation_csv(io::read_text(path)));
    }
    const auto rows = evaluation::compare_report(entries);
    out << (cfg.format == "csv" ? evaluation::format_report_csv(rows)
                                : evaluation::format_report_text(rows));
    return 0;
}

// `--config` must be applied before flags are bound so that flags win.
RunConfig preload_config(const std::vector<std::string>& args) {
    RunConfig cfg;
    for (std::size_t i = 0; i < args.size(); ++i) {
        std::string path;
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        }
        if (path.empty()) continue;
        try {
            cfg = run_config_from_json(json::parse(io::read_text(path)), cfg);
        } catch (const json::exception& e) {
            throw Error("cannot parse config " + path + ": " + e.what());
        }
    }
    return cfg;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    try {
        cfg = preload_config(args);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    CLI::App app{"Ikat and Block Print design generation"};
    app.name("craftgen");
    app.require_subcommand(1);
    std::string config_path;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON RunConfig applied before flags");
        sub->add_option("--seed", cfg.seed, "Base seed")->capture_default_str();
        sub->add_flag("--entropy", cfg.entropy, "Draw the base seed from the OS");
        sub->add_option("--out-dir", cfg.out_dir, "Output directory")->capture_default_str();
    };

    auto* ikat_cmd = app.add_subcommand("generate-ikat", "Motif + inspiration -> Ikat grid designs");
    common(ikat_cmd);
    ikat_cmd->add_option("--motif", cfg.motif, "Grayscale motif PNG");
    ikat_cmd->add_option("--inspiration", cfg.inspiration, "Inspiration PNG");
    ikat_cmd->add_option("--count", cfg.count, "Designs (seeds seed..seed+count-1)")->capture_default_str();
    ikat_cmd->add_option("--grid", cfg.grid, "Grid cells per side")->capture_default_str();
    ikat_cmd->add_option("--cell-px", cfg.cell_px, "PNG pixels per cell")->capture_default_str();
    ikat_cmd->add_option("--motif-threshold", cfg.motif_threshold, "Light/dark cutoff")->capture_default_str();

    auto* bp_cmd = app.add_subcommand("generate-blockprint", "Inspiration -> Block Print patterns");
    common(bp_cmd);
    bp_cmd->add_option("--inspiration", cfg.inspiration, "Inspiration PNG");
    bp_cmd->add_option("--count", cfg.count, "Designs to generate")->capture_default_str();
    bp_cmd->add_option("--shape", cfg.shape, "square|triangle|hexagon")->capture_default_str();
    bp_cmd->add_option("--style", cfg.style, "block_divide|recursive_divide")->capture_default_str();
    bp_cmd->add_option("--chords", cfg.chords, "Chords per block (block_divide)")->capture_default_str();
    bp_cmd->add_option("--depth", cfg.depth, "Split depth (recursive_divide)")->capture_default_str();
    bp_cmd->add_option("--curves", cfg.curves, "Allow curved chords")->capture_default_str();
    bp_cmd->add_option("--rows", cfg.rows, "Tile rows")->capture_default_str();
    bp_cmd->add_option("--cols", cfg.cols, "Tile columns")->capture_default_str();
    bp_cmd->add_option("--rotation", cfg.rotation, "none|seeded|fixed")->capture_default_str();
    bp_cmd->add_option("--rotation-degrees", cfg.rotation_degrees, "Angle for fixed rotation")
        ->capture_default_str();
    bp_cmd->add_option("--px", cfg.px, "Output width in pixels")->capture_default_str();
    bp_cmd->add_flag("--prune", cfg.prune, "Drop designs the model scores below threshold");
    bp_cmd->add_option("--model", cfg.model, "Pruning model JSON");
    bp_cmd->add_option("--threshold", cfg.threshold, "Pruning threshold")->capture_default_str();

    auto* pal_cmd = app.add_subcommand("extract-palette", "Inspiration -> palette.json");
    common(pal_cmd);
    pal_cmd->add_option("--inspiration,--image", cfg.inspiration, "Inspiration PNG");

    auto* train_cmd = app.add_subcommand("train-pruner", "Dataset CSV -> pruning model JSON");
    common(train_cmd);
    train_cmd->add_option("--dataset", cfg.dataset, "design,vote1,vote2,vote3,split CSV");
    train_cmd->add_option("--model", cfg.model, "Output path (default <out-dir>/model.json)");
    train_cmd->add_option("--learning-rate", cfg.learning_rate)->capture_default_str();
    train_cmd->add_option("--max-leaves", cfg.max_leaves)->capture_default_str();
    train_cmd->add_option("--min-samples-leaf", cfg.min_samples_leaf)->capture_default_str();
    train_cmd->add_option("--n-trees", cfg.n_trees)->capture_default_str();
    train_cmd->add_option("--subsample", cfg.subsample)->capture_default_str();

    auto* prune_cmd = app.add_subcommand("prune", "Score design JSONs with a model");
    common(prune_cmd);
    prune_cmd->add_option("--model", cfg.model, "Pruning model JSON");
    prune_cmd->add_option("--designs", cfg.designs, "Design JSON files");
    prune_cmd->add_option("--threshold", cfg.threshold)->capture_default_str();

    auto* eval_cmd = app.add_subcommand("evaluate", "Annotation CSVs -> likeability report");
    eval_cmd->add_option("--config", config_path, "JSON RunConfig applied before flags");
    eval_cmd->add_option("--annotations", cfg.annotations, "CSV files, optionally label=path");
    eval_cmd->add_option("--format", cfg.format, "text|csv")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    CLI::App* chosen = app.get_subcommands().front();
    const std::string command = chosen->get_name();
    try {
        if (cfg.entropy) {
            std::random_device rd;
            cfg.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
            cfg.entropy = false;
        }
        cfg.validate(command);
        if (command == "generate-ikat") return cmd_generate_ikat(cfg, out);
        if (command == "generate-blockprint") return cmd_generate_blockprint(cfg, out);
        if (command == "extract-palette") return cmd_extract_palette(cfg, out);
        if (command == "train-pruner") return cmd_train_pruner(cfg, out);
        if (command == "prune") return cmd_prune(cfg, out);
        return cmd_evaluate(cfg, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

int main_entry(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace craftgen::cli
