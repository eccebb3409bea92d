#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace craftgen::cli {

inline constexpr std::uint64_t kDefaultSeed = 20240501;

/// Every parameter any subcommand reads. Loaded from `--config <file>`
/// first, then overridden by flags; the resolved record is echoed so a run
/// can be replayed.
struct RunConfig {
    std::uint64_t seed = kDefaultSeed;
    bool entropy = false;
    std::string out_dir = "craftgen-out";
    int count = 1;

    std::string motif;
    std::string inspiration;
    std::string dataset;
    std::string model;
    std::vector<std::string> designs;
    std::vector<std::string> annotations;

    int grid = 128;
    int cell_px = 4;
    double motif_threshold = 0.5;

    std::string shape = "square";
    std::string style = "block_divide";
    std::string rotation = "none";
    int rotation_degrees = 0;
    int chords = 4;
    int depth = 3;
    bool curves = true;
    int rows = 4;
    int cols = 4;
    int px = 512;
    bool prune = false;
    double threshold = 0.5;

    double learning_rate = 0.3;
    int max_leaves = 85;
    int min_samples_leaf = 50;
    int n_trees = 100;
    double subsample = 1.0;

    std::string format = "text";

    /// Range checks for the fields `command` reads. Throws Error.
    void validate(std::string_view command) const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

nlohmann::json to_json(const RunConfig& cfg);
/// Keys absent from j keep their value in base; unknown keys are an error.
RunConfig run_config_from_json(const nlohmann::json& j, RunConfig base = {});

/// Worker threads for `tasks` independent jobs: hardware concurrency, capped
/// by CRAFTGEN_THREADS when set, never more than tasks.
unsigned worker_count(std::size_t tasks);

/// Runs job(i) for i in [0, n) across worker_count(n) threads. The first
/// exception thrown by any job is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& job);

/// Parses and dispatches one command line (args excludes the program name).
/// Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main_entry(int argc, char** argv);

}  // namespace craftgen::cli
