#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "craftgen/cli.hpp"
#include "craftgen/io.hpp"
#include "craftgen/serialization.hpp"
#include "oracles.hpp"

using namespace craftgen;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("craftgen-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

struct Outcome {
    int status;
    std::string out;
    std::string err;
};

Outcome run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int status = cli::run(args, out, err);
    return {status, out.str(), err.str()};
}

// A ring on a dark field: light pixels are motif.
void write_motif(const fs::path& path) {
    Raster img(48, 48);
    for (int y = 0; y < 48; ++y) {
        for (int x = 0; x < 48; ++x) {
            const int dx = x - 24, dy = y - 24;
            const int r2 = dx * dx + dy * dy;
            if (r2 < 18 * 18 && r2 > 9 * 9) img.at(x, y) = colors::white;
        }
    }
    io::write_png(path, img);
}

std::string text(const fs::path& p) { return io::read_text(p); }

nlohmann::json json_parse_file(const fs::path& p) { return nlohmann::json::parse(io::read_text(p)); }

}  // namespace

TEST_CASE("cli: generate-ikat is deterministic and writes one pair per seed") {
    TempDir tmp;
    write_motif(tmp.path / "motif.png");
    io::write_png(tmp.path / "insp.png", oracle::random_raster(40, 30, 3));
    auto args = [&](const std::string& dir) {
        return std::vector<std::string>{"generate-ikat",  "--motif", (tmp.path / "motif.png").string(),
                                        "--inspiration", (tmp.path / "insp.png").string(),
                                        "--grid",        "32",
                                        "--count",       "5",
                                        "--seed",        "11",
                                        "--out-dir",     (tmp.path / dir).string()};
    };
    const auto a = run(args("a"));
    REQUIRE_MESSAGE(a.status == 0, a.err);
    const auto b = run(args("b"));
    REQUIRE(b.status == 0);
    for (int s = 11; s < 16; ++s) {
        const std::string stem = "ikat_" + std::to_string(s);
        REQUIRE(fs::exists(tmp.path / "a" / (stem + ".png")));
        REQUIRE(fs::exists(tmp.path / "a" / (stem + ".csv")));
        CHECK(text(tmp.path / "a" / (stem + ".csv")) == text(tmp.path / "b" / (stem + ".csv")));
        CHECK(a.out.find("seed " + std::to_string(s) + " clipped_pixels") != std::string::npos);
    }
    CHECK(fs::exists(tmp.path / "a" / "run_config.json"));
    // 5 PNG/CSV pairs plus the config echo.
    CHECK(std::distance(fs::directory_iterator(tmp.path / "a"), fs::directory_iterator{}) == 11);
}

TEST_CASE("cli: missing input fails with the path named") {
    TempDir tmp;
    const std::string missing = (tmp.path / "nope.png").string();
    const auto r = run({"generate-ikat", "--motif", missing, "--inspiration", missing, "--out-dir",
                        (tmp.path / "o").string()});
    CHECK(r.status != 0);
    CHECK(r.err.find("nope.png") != std::string::npos);

    const auto usage = run({"generate-ikat", "--bogus"});
    CHECK(usage.status != 0);
    CHECK(run({}).status != 0);
}

TEST_CASE("cli: generate-blockprint, palette, train, prune and evaluate") {
    TempDir tmp;
    io::write_png(tmp.path / "insp.png", oracle::random_raster(40, 40, 9));
    const std::string out_dir = (tmp.path / "designs").string();
    const auto gen = run({"generate-blockprint", "--inspiration", (tmp.path / "insp.png").string(), "--count",
                          "10", "--px", "96", "--rows", "2", "--cols", "2", "--out-dir", out_dir});
    REQUIRE_MESSAGE(gen.status == 0, gen.err);
    const auto pal = serial::palette_colors_from_json(json_parse_file(fs::path(out_dir) / "palette.json"));
    CHECK(pal.size() >= 1);
    CHECK(pal.size() <= 10);
    for (int i = 0; i < 10; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "design_%04d", i);
        const auto json_path = fs::path(out_dir) / (std::string(name) + ".json");
        REQUIRE(fs::exists(json_path));
        // The stored document re-renders to the stored PNG.
        const auto doc = serial::design_document_from_json(json_parse_file(json_path));
        CHECK(doc.render() == io::read_png(fs::path(out_dir) / (std::string(name) + ".png")));
    }

    SUBCASE("prune requires a model") {
        const auto r = run({"generate-blockprint", "--inspiration", (tmp.path / "insp.png").string(), "--prune",
                            "--out-dir", (tmp.path / "x").string()});
        CHECK(r.status != 0);
        CHECK(r.err.find("--prune requires --model") != std::string::npos);
    }

    SUBCASE("train, then prune with the model") {
        std::string csv = "design,vote1,vote2,vote3,split\n";
        for (int i = 0; i < 10; ++i) {
            char name[32];
            std::snprintf(name, sizeof name, "designs/design_%04d.json", i);
            csv += std::string(name) + (i % 2 ? ",1,1,0," : ",0,0,1,") + (i < 8 ? "train" : "test") + "\n";
        }
        io::write_text(tmp.path / "dataset.csv", csv);
        const std::string model = (tmp.path / "m" / "model.json").string();
        const auto train = run({"train-pruner", "--dataset", (tmp.path / "dataset.csv").string(), "--model",
                                model, "--min-samples-leaf", "1", "--n-trees", "10", "--out-dir",
                                (tmp.path / "t").string()});
        REQUIRE_MESSAGE(train.status == 0, train.err);
        CHECK(train.out.find("train n 8") != std::string::npos);
        CHECK(train.out.find("test n 2") != std::string::npos);
        REQUIRE(fs::exists(model));

        std::vector<std::string> args{"prune", "--model", model, "--threshold", "0.5", "--out-dir",
                                      (tmp.path / "p").string(), "--designs"};
        for (int i = 0; i < 10; ++i) {
            char name[32];
            std::snprintf(name, sizeof name, "design_%04d.json", i);
            args.push_back((fs::path(out_dir) / name).string());
        }
        const auto pr = run(args);
        REQUIRE_MESSAGE(pr.status == 0, pr.err);
        const auto log = text(tmp.path / "p" / "prune_log.csv");
        CHECK(log.rfind("design,score,kept\n", 0) == 0);
        CHECK(std::count(log.begin(), log.end(), '\n') == 11);

        const auto gp = run({"generate-blockprint", "--inspiration", (tmp.path / "insp.png").string(), "--count",
                             "6", "--px", "96", "--prune", "--model", model, "--out-dir",
                             (tmp.path / "g").string()});
        REQUIRE_MESSAGE(gp.status == 0, gp.err);
        const auto glog = text(tmp.path / "g" / "prune_log.csv");
        CHECK(std::count(glog.begin(), glog.end(), '\n') == 7);
        // Each design is either written or marked as discarded, never both.
        for (int i = 0; i < 6; ++i) {
            char name[32];
            std::snprintf(name, sizeof name, "design_%04d.json", i);
            const bool kept = glog.find(std::string(name) + ",") != std::string::npos &&
                              fs::exists(tmp.path / "g" / name);
            const bool marked = glog.find(std::string(name)) != std::string::npos;
            CHECK(marked);
            if (!fs::exists(tmp.path / "g" / name)) CHECK_FALSE(kept);
        }
    }

    SUBCASE("single-class labels are rejected") {
        std::string csv = "design,vote1,vote2,vote3,split\n";
        for (int i = 0; i < 10; ++i) {
            char name[32];
            std::snprintf(name, sizeof name, "designs/design_%04d.json", i);
            csv += std::string(name) + ",1,1,1,train\n";
        }
        io::write_text(tmp.path / "dataset.csv", csv);
        const auto r = run({"train-pruner", "--dataset", (tmp.path / "dataset.csv").string(), "--out-dir",
                            (tmp.path / "t").string()});
        CHECK(r.status != 0);
    CHECK_MESSAGE(r.err.find("degenerate labels") != std::string::npos, r.err);
    }
}

TEST_CASE("cli: uniform inspiration gives a one-color palette") {
    TempDir tmp;
    io::write_png(tmp.path / "flat.png", Raster(20, 20, RgbColor{0.2, 0.4, 0.6}));
    const auto r = run({"extract-palette", "--inspiration", (tmp.path / "flat.png").string(), "--out-dir",
                        tmp.path.string()});
    REQUIRE_MESSAGE(r.status == 0, r.err);
    const auto colors = serial::palette_colors_from_json(json_parse_file(tmp.path / "palette.json"));
    REQUIRE(colors.size() == 1);
    CHECK(to_hex(colors[0]) == to_hex(RgbColor{0.2, 0.4, 0.6}));
}

TEST_CASE("cli: evaluate prints the likeability index") {
    TempDir tmp;
    std::string csv = "design,j0,j1,j2,j3,j4,j5,j6,j7,j8,j9\n";
    for (int i = 0; i < 10; ++i) {
        csv += "d" + std::to_string(i);
        for (int k = 0; k < 10; ++k) csv += k <= i ? ",1" : ",0";
        csv += "\n";
    }
    io::write_text(tmp.path / "stairs.csv", csv);
    const auto r = run({"evaluate", "--annotations", "stairs=" + (tmp.path / "stairs.csv").string(), "--format",
                        "csv"});
    REQUIRE_MESSAGE(r.status == 0, r.err);
    CHECK(r.out == "label,likeability_index\nstairs,50\n");

    const auto t = run({"evaluate", "--annotations", (tmp.path / "stairs.csv").string()});
    REQUIRE(t.status == 0);
    CHECK(t.out.find("stairs") != std::string::npos);
    CHECK(t.out.find("50") != std::string::npos);
    CHECK(run({"evaluate", "--annotations", (tmp.path / "stairs.csv").string(), "--format", "xml"}).status != 0);
}

TEST_CASE("cli: config file supplies defaults and flags override it") {
    TempDir tmp;
    write_motif(tmp.path / "motif.png");
    io::write_png(tmp.path / "insp.png", oracle::random_raster(16, 16, 4));
    io::write_text(tmp.path / "cfg.json",
                   "{\"motif\": \"" + (tmp.path / "motif.png").string() + "\", \"inspiration\": \"" +
                       (tmp.path / "insp.png").string() + "\", \"grid\": 16, \"seed\": 3, \"out_dir\": \"" +
                       (tmp.path / "o").string() + "\"}");
    const auto r = run({"generate-ikat", "--config", (tmp.path / "cfg.json").string(), "--seed", "4"});
    REQUIRE_MESSAGE(r.status == 0, r.err);
    CHECK(fs::exists(tmp.path / "o" / "ikat_4.csv"));
    const auto echoed = cli::run_config_from_json(json_parse_file(tmp.path / "o" / "run_config.json"));
    CHECK(echoed.grid == 16);
    CHECK(echoed.seed == 4);

    io::write_text(tmp.path / "bad.json", "{\"gird\": 16}");
    const auto bad = run({"generate-ikat", "--config=" + (tmp.path / "bad.json").string()});
    CHECK(bad.status != 0);
    CHECK(bad.err.find("gird") != std::string::npos);

    cli::RunConfig cfg;
    cfg.designs = {"a", "b"};
    cfg.px = 300;
    CHECK(cli::run_config_from_json(cli::to_json(cfg)) == cfg);
}

TEST_CASE("cli: parallel_for covers every index and rethrows") {
    std::vector<int> hits(1000, 0);
    cli::parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    CHECK(std::count(hits.begin(), hits.end(), 1) == 1000);
    CHECK_THROWS_AS(cli::parallel_for(50,
                                      [](std::size_t i) {
                                          if (i == 17) throw std::runtime_error("boom");
                                      }),
                    std::runtime_error);
    CHECK(cli::worker_count(1) == 1);
}
