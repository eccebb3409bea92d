#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <set>
#include <string>
#include <thread>

#include "craftgen/blockprint.hpp"
#include "craftgen/cli.hpp"
#include "craftgen/error.hpp"
#include "craftgen/gbm.hpp"

namespace craftgen::cli {
namespace {

using nlohmann::json;

void require(bool ok, const std::string& message) {
    if (!ok) throw Error(message);
}

template <typename T>
void read_field(const json& j, const char* key, T& into) {
    const auto it = j.find(key);
    if (it == j.end()) return;
    try {
        into = it->template get<T>();
    } catch (const json::exception&) {
        throw Error(std::string("config field '") + key + "' has the wrong type");
    }
}

}  // namespace

void RunConfig::validate(std::string_view command) const {
    require(!out_dir.empty(), "out-dir must not be empty");
    require(count >= 1 && count <= 100000, "count must be in [1, 100000]");
    if (command == "generate-ikat") {
        require(!motif.empty(), "--motif is required");
        require(!inspiration.empty(), "--inspiration is required");
        require(grid >= 1 && grid <= 4096, "grid must be in [1, 4096]");
        require(cell_px >= 1 && cell_px <= 64, "cell-px must be in [1, 64]");
        require(motif_threshold > 0.0 && motif_threshold < 1.0, "motif-threshold must be in (0,1)");
    }
    if (command == "generate-blockprint") {
        require(!inspiration.empty(), "--inspiration is required");
        blockprint::shape_kind_from_string(shape);
        blockprint::divide_style_from_string(style);
        blockprint::rotation_mode_from_string(rotation);
        require(chords >= 1 && chords <= blockprint::kMaxBlockChords, "chords must be in [1, 48]");
        require(depth >= 0 && depth <= blockprint::kMaxRecursiveDepth, "depth must be in [0, 10]");
        require(rows >= 1 && rows <= 256 && cols >= 1 && cols <= 256, "rows and cols must be in [1, 256]");
        require(px >= blockprint::kMinRenderSize && px <= 8192, "px must be in [64, 8192]");
        require(!prune || !model.empty(), "--prune requires --model");
    }
    if (command == "generate-blockprint" || command == "prune") {
        require(threshold > 0.0 && threshold < 1.0, "threshold must be in (0,1)");
    }
    if (command == "extract-palette") require(!inspiration.empty(), "--inspiration is required");
    if (command == "train-pruner") {
        require(!dataset.empty(), "--dataset is required");
        pruning::GbmHyperparams{learning_rate, max_leaves, min_samples_leaf, n_trees, 1.0, subsample}
            .validate();
    }
    if (command == "prune") {
        require(!model.empty(), "--model is required");
        require(!designs.empty(), "--designs is required");
    }
    if (command == "evaluate") {
        require(!annotations.empty(), "--annotations is required");
        require(format == "text" || format == "csv", "format must be text or csv");
    }
}

json to_json(const RunConfig& c) {
    return {{"seed", c.seed},
            {"entropy", c.entropy},
            {"out_dir", c.out_dir},
            {"count", c.count},
            {"motif", c.motif},
            {"inspiration", c.inspiration},
            {"dataset", c.dataset},
            {"model", c.model},
            {"designs", c.designs},
            {"annotations", c.annotations},
            {"grid", c.grid},
            {"cell_px", c.cell_px},
            {"motif_threshold", c.motif_threshold},
            {"shape", c.shape},
            {"style", c.style},
            {"rotation", c.rotation},
            {"rotation_degrees", c.rotation_degrees},
            {"chords", c.chords},
            {"depth", c.depth},
            {"curves", c.curves},
            {"rows", c.rows},
            {"cols", c.cols},
            {"px", c.px},
            {"prune", c.prune},
            {"threshold", c.threshold},
            {"learning_rate", c.learning_rate},
            {"max_leaves", c.max_leaves},
            {"min_samples_leaf", c.min_samples_leaf},
            {"n_trees", c.n_trees},
            {"subsample", c.subsample},
            {"format", c.format}};
}

RunConfig run_config_from_json(const json& j, RunConfig c) {
    if (!j.is_object()) throw Error("config must be a JSON object");
    const json known = to_json(RunConfig{});
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) throw Error("unknown config field '" + key + "'");
    }
    read_field(j, "seed", c.seed);
    read_field(j, "entropy", c.entropy);
    read_field(j, "out_dir", c.out_dir);
    read_field(j, "count", c.count);
    read_field(j, "motif", c.motif);
    read_field(j, "inspiration", c.inspiration);
    read_field(j, "dataset", c.dataset);
    read_field(j, "model", c.model);
    read_field(j, "designs", c.designs);
    read_field(j, "annotations", c.annotations);
    read_field(j, "grid", c.grid);
    read_field(j, "cell_px", c.cell_px);
    read_field(j, "motif_threshold", c.motif_threshold);
    read_field(j, "shape", c.shape);
    read_field(j, "style", c.style);
    read_field(j, "rotation", c.rotation);
    read_field(j, "rotation_degrees", c.rotation_degrees);
    read_field(j, "chords", c.chords);
    read_field(j, "depth", c.depth);
    read_field(j, "curves", c.curves);
    read_field(j, "rows", c.rows);
    read_field(j, "cols", c.cols);
    read_field(j, "px", c.px);
    read_field(j, "prune", c.prune);
    read_field(j, "threshold", c.threshold);
    read_field(j, "learning_rate", c.learning_rate);
    read_field(j, "max_leaves", c.max_leaves);
    read_field(j, "min_samples_leaf", c.min_samples_leaf);
    read_field(j, "n_trees", c.n_trees);
    read_field(j, "subsample", c.subsample);
    read_field(j, "format", c.format);
    return c;
}

unsigned worker_count(std::size_t tasks) {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("CRAFTGEN_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
    }
    return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(n, tasks)));
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& job) {
    if (n == 0) return;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first;
    std::mutex mu;
    auto work = [&] {
        for (std::size_t i = next++; i < n && !failed; i = next++) {
            try {
                job(i);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!first) first = std::current_exception();
                failed = true;
            }
        }
    };
    const unsigned workers = worker_count(n);
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (first) std::rethrow_exception(first);
}

}  // namespace craftgen::cli
