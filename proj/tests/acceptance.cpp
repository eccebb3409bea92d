// Acceptance gate: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "craftgen/blockprint.hpp"
#include "craftgen/cli.hpp"
#include "craftgen/color.hpp"
#include "craftgen/evaluation.hpp"
#include "craftgen/features.hpp"
#include "craftgen/gbm.hpp"
#include "craftgen/ikat.hpp"
#include "craftgen/io.hpp"
#include "craftgen/palette.hpp"
#include "craftgen/rng.hpp"
#include "craftgen/serialization.hpp"
#include "oracles.hpp"

using namespace craftgen;
namespace fs = std::filesystem;

namespace {

// Tolerances and budgets.
constexpr double kCiedeTolerance = 1e-4;
constexpr double kCiedeBudgetSeconds = 1.0;
constexpr double kStatsTolerance = 1e-3;
constexpr double kRoundTripTolerance = 1e-6;
constexpr int kRegionOracleRes = 768;
constexpr int kRegionOracleMinPixels = 16;
constexpr double kGbmBudgetSeconds = 30.0;
constexpr double kEndToEndBudgetSeconds = 60.0;

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Collects the first few failures of a criterion.
class Check {
public:
    void require(bool ok, const std::string& what) {
        if (ok) return;
        if (failures_++ < 5) notes_ += (notes_.empty() ? "" : "; ") + what;
    }
    Outcome done(const std::string& summary) const {
        if (failures_ == 0) return {true, summary};
        return {false, summary + " | " + std::to_string(failures_) + " failure(s): " + notes_};
    }

private:
    int failures_ = 0;
    std::string notes_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("craftgen-acceptance-" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

Outcome ciede2000_pairs() {
    Check c;
    const auto pairs = oracle::load_ciede2000_pairs(std::string(CRAFTGEN_TEST_DATA_DIR) + "/ciede2000_pairs.csv");
    c.require(pairs.size() == 34, "expected 34 pairs, got " + std::to_string(pairs.size()));
    double worst = 0.0;
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& p = pairs[i];
        for (const double d : {delta_e_ciede2000(p.x, p.y), delta_e_ciede2000(p.y, p.x)}) {
            worst = std::max(worst, std::abs(d - p.expected));
            c.require(std::abs(d - p.expected) <= kCiedeTolerance, "pair " + std::to_string(i + 1));
        }
    }
    const double secs = seconds_since(t0);
    c.require(secs < kCiedeBudgetSeconds, "runtime " + fmt(secs) + " s");
    return c.done(std::to_string(pairs.size()) + " pairs, max |err| " + fmt(worst) + ", " + fmt(secs) + " s");
}

Outcome reinhard() {
    Check c;
    int accepted = 0, attempts = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 0; accepted < 50 && attempts < 1000; seed += 2, ++attempts) {
        const auto source = oracle::random_raster(32, 32, seed, 0.3, 0.7);
        const auto target = oracle::naive_stats(oracle::random_raster(32, 32, seed + 1, 0.25, 0.75));
        GamutTally tally;
        const auto out = reinhard_transfer(source, target, tally);
        if (tally.clipped_pixels != 0) continue;
        ++accepted;
        const auto got = oracle::naive_stats(out);
        for (int k = 0; k < 3; ++k) {
            worst = std::max({worst, std::abs(got.mean[k] - target.mean[k]), std::abs(got.std[k] - target.std[k])});
            c.require(std::abs(got.mean[k] - target.mean[k]) <= kStatsTolerance, "mean, seed " + std::to_string(seed));
            c.require(std::abs(got.std[k] - target.std[k]) <= kStatsTolerance, "std, seed " + std::to_string(seed));
        }
    }
    c.require(accepted == 50, "only " + std::to_string(accepted) + " clip-free pairs");

    double self_worst = 0.0;
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
        const auto src = oracle::random_raster(32, 32, seed);
        const auto self = reinhard_transfer(src, channel_stats(src));
        for (std::size_t i = 0; i < src.size(); ++i) {
            const auto& a = self.pixels()[i];
            const auto& b = src.pixels()[i];
            self_worst = std::max({self_worst, std::abs(a.r - b.r), std::abs(a.g - b.g), std::abs(a.b - b.b)});
        }
    }
    c.require(self_worst <= kRoundTripTolerance, "self-transfer error " + fmt(self_worst));
    return c.done(std::to_string(accepted) + " clip-free pairs, max stat err " + fmt(worst) +
                  ", self-transfer err " + fmt(self_worst));
}

// Light ring and cross on a dark field.
Raster fixture_motif() {
    Raster img(256, 256);
    for (int y = 0; y < 256; ++y) {
        for (int x = 0; x < 256; ++x) {
            const int dx = x - 128, dy = y - 128;
            const int r2 = dx * dx + dy * dy;
            if ((r2 < 104 * 104 && r2 > 64 * 64) || std::abs(dx) < 10 || std::abs(dy) < 10) img.at(x, y) = colors::white;
        }
    }
    return img;
}

Outcome ikat_determinism() {
    Check c;
    const ikat::Motif motif(fixture_motif());
    const auto inspiration = oracle::random_raster(48, 48, 21);
    ikat::IkatOptions opts;
    opts.seed = 7;
    opts.grid = 128;
    std::vector<std::string> csvs;
    ikat::GridDesign last = ikat::run_ikat_pipeline(motif, inspiration, opts);
    for (int run = 0; run < 3; ++run) {
        last = ikat::run_ikat_pipeline(motif, inspiration, opts);
        csvs.push_back(serial::grid_to_csv(last));
    }
    c.require(csvs[0] == csvs[1] && csvs[1] == csvs[2], "CSV differs between runs");
    const auto lines = std::count(csvs[0].begin(), csvs[0].end(), '\n');
    c.require(lines == 1 + 16384, "CSV has " + std::to_string(lines - 1) + " cells");
    c.require(last.n() == 128 && last.cells().size() == 16384, "grid is not 128x128");

    // Every rendered cell is one flat color equal to its stored value.
    constexpr int kCell = 3;
    const auto img = last.render(kCell);
    for (int row = 0; row < last.n(); ++row) {
        for (int col = 0; col < last.n(); ++col) {
            bool flat = true;
            for (int y = 0; y < kCell; ++y) {
                for (int x = 0; x < kCell; ++x) flat &= img.at(col * kCell + x, row * kCell + y) == last.cell(row, col);
            }
            c.require(flat, "cell " + std::to_string(row) + "," + std::to_string(col) + " not flat");
        }
    }
    return c.done("3 runs byte-identical, " + std::to_string(lines - 1) + " single-color cells");
}

Outcome divide_regions() {
    Check c;
    using namespace blockprint;
    int checked = 0;
    for (int d = 0; d <= 5; ++d) {
        for (const ShapeKind kind : {ShapeKind::square, ShapeKind::triangle, ShapeKind::hexagon}) {
            for (std::uint64_t seed = 0; seed < 3; ++seed) {
                const auto block = recursive_divide(BaseShape(kind), d, seed * 31 + static_cast<std::uint64_t>(d));
                const int got = oracle::rasterized_region_count(block, kRegionOracleRes, kRegionOracleMinPixels);
                c.require(got == (1 << d), "depth " + std::to_string(d) + " gave " + std::to_string(got));
                c.require(block.region_count() == (1 << d), "region_count at depth " + std::to_string(d));
                ++checked;
            }
        }
    }
    int trials = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const auto kind = static_cast<ShapeKind>(seed % 3);
        const int n = 1 + static_cast<int>(seed % 8);
        const auto block = block_divide(BaseShape(kind), n, seed, seed % 2 == 0);
        for (const auto& ch : block.chords()) {
            c.require(ch.from.edge != ch.to.edge, "seed " + std::to_string(seed) + " chord on one edge");
        }
        ++trials;
    }
    return c.done(std::to_string(checked) + " recursive designs at 2^d, " + std::to_string(trials) +
                  " block_divide trials with distinct edges");
}

Outcome palette_only_render() {
    Check c;
    using namespace blockprint;
    std::size_t pixels = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(seed);
        std::vector<RgbColor> pal;
        const auto n = 1 + rng.below(10);
        for (std::uint64_t i = 0; i < n; ++i) pal.push_back({rng.uniform(), rng.uniform(), rng.uniform()});
        const auto kind = static_cast<ShapeKind>(seed % 3);
        const auto block = seed % 2 ? block_divide(BaseShape(kind), 1 + static_cast<int>(seed % 6), seed)
                                    : recursive_divide(BaseShape(kind), static_cast<int>(seed % 5), seed);
        const RotationPolicy policy{static_cast<RotationMode>(seed % 2), 0};
        const auto pattern = tile_pattern(block, 1 + static_cast<int>(seed % 4), 1 + static_cast<int>(seed % 3), policy, seed);
        const auto img = render_pattern(pattern, pal, 128);
        const std::set<RgbColor> allowed(pal.begin(), pal.end());
        std::size_t stray = 0;
        for (const auto& p : img.pixels()) stray += allowed.count(p) ? 0 : 1;
        pixels += img.size();
        c.require(stray == 0, "seed " + std::to_string(seed) + ": " + std::to_string(stray) + " blended pixels");
    }
    return c.done("100 renders, " + std::to_string(pixels) + " pixels, all palette colors");
}

// Twenty inspirations of varied character: noise, gradients, flat blocks,
// stripes and mixtures.
std::vector<Raster> palette_corpus() {
    std::vector<Raster> out;
    for (std::uint64_t s = 0; s < 5; ++s) out.push_back(oracle::random_raster(48, 48, 500 + s));
    for (int k = 0; k < 5; ++k) {
        Raster img(64, 64);
        for (int y = 0; y < 64; ++y) {
            for (int x = 0; x < 64; ++x) img.at(x, y) = {x / 63.0, y / 63.0, (k + 1) / 6.0};
        }
        out.push_back(img);
    }
    for (std::uint64_t s = 0; s < 5; ++s) {
        Rng rng(900 + s);
        std::vector<RgbColor> blocks;
        for (int i = 0; i < 16; ++i) blocks.push_back({rng.uniform(), rng.uniform(), rng.uniform()});
        Raster img(64, 64);
        for (int y = 0; y < 64; ++y) {
            for (int x = 0; x < 64; ++x) img.at(x, y) = blocks[static_cast<std::size_t>((y / 16) * 4 + x / 16)];
        }
        out.push_back(img);
    }
    for (int k = 0; k < 4; ++k) {
        Raster img(60, 60);
        for (int y = 0; y < 60; ++y) {
            for (int x = 0; x < 60; ++x) {
                const bool band = ((x + k * y) / 6) % 2 == 0;
                img.at(x, y) = band ? RgbColor{0.8, 0.3 + 0.1 * k, 0.2} : RgbColor{0.1, 0.2, 0.5 + 0.1 * k};
            }
        }
        out.push_back(img);
    }
    out.push_back(Raster(32, 32, RgbColor{0.45, 0.3, 0.2}));
    return out;
}

Outcome palette_extraction() {
    Check c;
    const auto corpus = palette_corpus();
    std::size_t smallest = 99, largest = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto p = palette::extract_palette(corpus[i]);
        const std::string tag = "image " + std::to_string(i);
        smallest = std::min(smallest, p.size());
        largest = std::max(largest, p.size());
        c.require(p.size() >= 1 && p.size() <= 10, tag + " has " + std::to_string(p.size()) + " colors");
        const auto& e = p.entries();
        for (std::size_t a = 0; a < e.size(); ++a) {
            for (std::size_t b = a + 1; b < e.size(); ++b) {
                const double d = delta_e_ciede2000(rgb_to_lab(e[a].color), rgb_to_lab(e[b].color));
                c.require(d > p.merge_threshold(), tag + " pair under threshold");
            }
        }
        const auto again = palette::merge_similar(e, p.merge_threshold());
        c.require(again.size() == e.size(), tag + " merge is not a fixpoint");
        for (std::size_t k = 0; k < std::min(again.size(), e.size()); ++k) {
            c.require(again[k].color == e[k].color && again[k].area_fraction == e[k].area_fraction,
                      tag + " merge changed an entry");
        }
    }
    return c.done(std::to_string(corpus.size()) + " images, palette sizes " + std::to_string(smallest) + ".." +
                  std::to_string(largest) + ", merge fixpoint holds");
}

struct Dataset {
    std::vector<std::vector<double>> rows;
    std::vector<bool> labels;
};

// 20 uniform features; the label is a noisy threshold on a mix of three.
Dataset synthetic(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    Dataset d;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> row(pruning::FeatureVector::kDimension);
        for (auto& v : row) v = rng.uniform();
        const double score = row[0] + 0.5 * row[3] - 0.7 * row[12] + 0.3 * rng.uniform();
        d.rows.push_back(std::move(row));
        d.labels.push_back(score > 0.55);
    }
    return d;
}

Outcome gbm() {
    Check c;
    using namespace pruning;
    const auto t0 = std::chrono::steady_clock::now();

    const auto data = synthetic(1000, 77);
    const GbmHyperparams hp;
    c.require(hp.learning_rate == 0.3 && hp.max_leaves == 85 && hp.min_samples_leaf == 50,
              "default hyperparameters changed");
    TrainingTrace trace;
    const auto model = train_gbm(data.rows, data.labels, hp, 5, trace);
    for (std::size_t i = 1; i < trace.log_loss.size(); ++i) {
        c.require(trace.log_loss[i] <= trace.log_loss[i - 1], "loss rose at stage " + std::to_string(i));
    }
    int max_leaves = 0;
    std::size_t min_leaf = data.rows.size();
    for (const auto& tree : model.trees) {
        max_leaves = std::max(max_leaves, tree.leaf_count());
        for (const auto& node : tree.nodes) {
            if (node.is_leaf()) min_leaf = std::min(min_leaf, node.samples);
        }
    }
    c.require(max_leaves <= 85, "tree with " + std::to_string(max_leaves) + " leaves");
    c.require(min_leaf >= 50, "leaf with " + std::to_string(min_leaf) + " samples");

    Dataset toy;
    for (int i = 0; i < 200; ++i) {
        toy.rows.push_back({i / 200.0});
        toy.labels.push_back(i >= 100);
    }
    GbmHyperparams toy_hp;
    toy_hp.n_trees = 20;
    const auto toy_model = train_gbm(toy.rows, toy.labels, toy_hp, 1);
    const double toy_acc = accuracy(toy_model, toy.rows, toy.labels);
    c.require(toy_acc == 1.0, "toy accuracy " + fmt(toy_acc));

    std::string csv = "design,vote1,vote2,vote3,split\n";
    for (int i = 0; i < 1100; ++i) csv += "d" + std::to_string(i) + ".json,1,0,1," + (i < 1000 ? "train" : "test") + "\n";
    const auto rows = serial::parse_dataset_csv(csv);
    const auto n_train = std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.train; });
    c.require(n_train == 1000 && rows.size() - static_cast<std::size_t>(n_train) == 100, "split counts");

    const double secs = seconds_since(t0);
    c.require(secs < kGbmBudgetSeconds, "runtime " + fmt(secs) + " s");
    return c.done(std::to_string(model.trees.size()) + " trees, loss " + fmt(trace.log_loss.front()) + " -> " +
                  fmt(trace.log_loss.back()) + ", max leaves " + std::to_string(max_leaves) + ", min leaf " +
                  std::to_string(min_leaf) + ", toy acc " + fmt(toy_acc) + ", split 1000/100, " + fmt(secs) + " s");
}

evaluation::AnnotationMatrix random_matrix(Rng& rng) {
    const int d = 1 + static_cast<int>(rng.below(50));
    const int j = 1 + static_cast<int>(rng.below(50));
    const double bias = rng.uniform();
    std::vector<bool> votes;
    for (int i = 0; i < d * j; ++i) votes.push_back(rng.uniform() < bias);
    return evaluation::AnnotationMatrix(d, j, votes);
}

Outcome likeability() {
    Check c;
    using namespace evaluation;
    Rng rng(31337);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto m = random_matrix(rng);
        c.require(likeability_index(m) == oracle::brute_likeability_index(m), "trial " + std::to_string(trial));
    }
    const int stairs = likeability_index(oracle::staircase_matrix());
    c.require(stairs == 50, "staircase gave " + std::to_string(stairs));
    const AnnotationMatrix all_true(7, 5, std::vector<bool>(35, true));
    c.require(likeability_index(all_true) == 100, "all-true is not 100");
    for (int trial = 0; trial < 200; ++trial) {
        auto m = random_matrix(rng);
        const int before = likeability_index(m);
        const int d = static_cast<int>(rng.below(static_cast<std::uint64_t>(m.n_designs())));
        const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(m.n_judges())));
        const bool was = m.vote(d, j);
        m.set_vote(d, j, !was);
        const int after = likeability_index(m);
        // Adding a like never lowers the index; removing one never raises it.
        c.require(was ? after <= before : after >= before, "monotonicity trial " + std::to_string(trial));
    }
    return c.done("1000 matrices match brute force, staircase " + std::to_string(stairs) +
                  ", all-true 100, 200 flips monotone");
}

// A small model that favors designs whose largest color covers more area
// than the median design does.
pruning::GbmModel fixture_model() {
    std::vector<std::vector<double>> rows;
    for (std::uint64_t s = 0; s < 60; ++s) {
        const auto block = blockprint::block_divide(blockprint::BaseShape(blockprint::ShapeKind::square),
                                                    1 + static_cast<int>(s % 5), 4000 + s);
        const auto pattern = blockprint::tile_pattern(block, 3, 3, {}, s);
        const std::vector<RgbColor> pal = {{0.8, 0.2, 0.2}, {0.2, 0.6, 0.3}, {0.1, 0.1, 0.4}, {0.9, 0.8, 0.3}};
        rows.push_back(pruning::extract_features(blockprint::render_pattern(pattern, pal, 96)).values());
    }
    std::vector<double> top;
    for (const auto& r : rows) top.push_back(r[0]);
    std::nth_element(top.begin(), top.begin() + 30, top.end());
    const double median = top[30];
    std::vector<bool> labels;
    for (const auto& r : rows) labels.push_back(r[0] >= median);
    pruning::GbmHyperparams hp;
    hp.min_samples_leaf = 5;
    hp.n_trees = 20;
    return pruning::train_gbm(rows, labels, hp, 3);
}

Outcome end_to_end() {
    Check c;
    TempDir tmp;
    io::write_png(tmp.path / "inspiration.png", oracle::random_raster(64, 64, 2718, 0.1, 0.9));
    io::write_text(tmp.path / "model.json", serial::to_json(fixture_model()).dump() + "\n");
    const fs::path out_dir = tmp.path / "out";

    std::ostringstream out, err;
    const auto t0 = std::chrono::steady_clock::now();
    const int status = cli::run({"generate-blockprint", "--inspiration", (tmp.path / "inspiration.png").string(),
                                 "--count", "50", "--prune", "--model", (tmp.path / "model.json").string(),
                                 "--threshold", "0.5", "--out-dir", out_dir.string()},
                                out, err);
    const double secs = seconds_since(t0);
    c.require(status == 0, "exit status " + std::to_string(status) + ": " + err.str());
    c.require(secs < kEndToEndBudgetSeconds, "runtime " + fmt(secs) + " s");
    if (status != 0) return c.done("run failed");

    c.require(fs::exists(out_dir / "palette.json"), "palette.json missing");
    const auto log = io::read_text(out_dir / "prune_log.csv");
    std::istringstream lines(log);
    std::string line;
    std::getline(lines, line);
    int kept = 0, discarded = 0;
    while (std::getline(lines, line)) {
        const auto a = line.find(',');
        const auto b = line.rfind(',');
        const std::string name = line.substr(0, a);
        const bool keep = line.substr(b + 1) == "1";
        const fs::path json_path = out_dir / name;
        if (!keep) {
            ++discarded;
            c.require(!fs::exists(json_path), name + " was discarded but written");
            continue;
        }
        ++kept;
        if (!fs::exists(json_path)) {
            c.require(false, name + " kept but missing");
            continue;
        }
        const auto doc = serial::design_document_from_json(nlohmann::json::parse(io::read_text(json_path)));
        const auto png = json_path.parent_path() / (json_path.stem().string() + ".png");
        c.require(doc.render() == io::read_png(png), name + " does not replay to its PNG");
    }
    c.require(kept + discarded == 50, "prune log lists " + std::to_string(kept + discarded) + " designs");
    c.require(kept > 0, "no design kept, replay unchecked");
    return c.done("50 designs in " + fmt(secs) + " s, kept " + std::to_string(kept) + ", discarded " +
                  std::to_string(discarded) + ", every kept design replays");
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"ciede2000 verification pairs", ciede2000_pairs},
        {"reinhard transfer statistics", reinhard},
        {"ikat pipeline determinism", ikat_determinism},
        {"block division region counts", divide_regions},
        {"renders use palette colors only", palette_only_render},
        {"palette extraction", palette_extraction},
        {"gradient boosted pruner", gbm},
        {"likeability index", likeability},
        {"block print end to end", end_to_end},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
    }
    return failed;
}
