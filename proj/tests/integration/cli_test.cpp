#include "fixtures.hpp"

#include "vai/commands.hpp"
#include "vai/csv.hpp"
#include "vai/image_io.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result vai_run(std::vector<std::string> args) {
    args.insert(args.begin(), "vai");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = vai::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

void spit(const fs::path& p, const std::string& text) {
    fs::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << text;
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("vai_cli_") + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
        ::setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
    }
    void TearDown() override { fs::remove_all(dir_); }

    // Cohort styles: 0 smooth gradient, 1 uniform noise, 2 coarse blocks.
    void write_image(const fs::path& p, int style, int seed) {
        std::mt19937_64 rng(static_cast<unsigned>(seed));
        vai::PixelBuffer img = fixtures::random_rgb(48, 40, rng);
        for (int y = 0; y < img.height(); ++y)
            for (int x = 0; x < img.width(); ++x)
                for (int c = 0; c < 3; ++c) {
                    auto& s = img.at(x, y, c);
                    if (style == 0) s = static_cast<std::uint8_t>((x * 4 + y * 2 + c * 30 + seed) % 256);
                    if (style == 2) s = static_cast<std::uint8_t>(((x / 8 + y / 8) % 2) * 200 + c * 10 + seed % 40);
                }
        vai::write_file(p, vai::encode_png(img));
    }

    fs::path build_cohorts(int n_cohorts, int per_cohort) {
        std::string manifest = "path,cohort,label\n";
        for (int c = 0; c < n_cohorts; ++c)
            for (int i = 0; i < per_cohort; ++i) {
                const std::string rel = "g" + std::to_string(c) + "/img" + std::to_string(i) + ".png";
                write_image(dir_ / rel, c % 3, c * 100 + i);
                manifest += rel + ",g" + std::to_string(c) + ",fake\n";
            }
        spit(dir_ / "manifest.csv", manifest);
        return dir_ / "manifest.csv";
    }

    fs::path dir_;
};

TEST_F(CliTest, ScoreWritesReportsAndIsRepeatable) {
    const fs::path m = build_cohorts(2, 2);
    const Result r = vai_run({"score", "--manifest", m.string(), "--out", (dir_ / "o1").string(), "--workers", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    for (const char* f : {"scores.json", "scores.csv", "metrics.csv", "scatter.svg"}) EXPECT_TRUE(fs::exists(dir_ / "o1" / f)) << f;
    const auto rows = vai::csv::parse(slurp(dir_ / "o1" / "scores.csv"));
    EXPECT_EQ(rows.size(), 3u);
    EXPECT_EQ(vai::csv::parse(slurp(dir_ / "o1" / "metrics.csv")).size(), 5u);

    ASSERT_EQ(vai_run({"score", "--manifest", m.string(), "--out", (dir_ / "o2").string(), "--workers", "1"}).code, 0);
    for (const char* f : {"scores.json", "scores.csv", "metrics.csv", "scatter.svg"})
        EXPECT_EQ(slurp(dir_ / "o1" / f), slurp(dir_ / "o2" / f)) << f;
}

TEST_F(CliTest, WorkerCountDoesNotChangeOutput) {
    const fs::path m = build_cohorts(3, 3);
    ASSERT_EQ(vai_run({"score", "--manifest", m.string(), "--out", (dir_ / "w1").string(), "--workers", "1"}).code, 0);
    ASSERT_EQ(vai_run({"score", "--manifest", m.string(), "--out", (dir_ / "w3").string(), "--workers", "3"}).code, 0);
    for (const char* f : {"scores.json", "scores.csv", "metrics.csv", "scatter.svg"})
        EXPECT_EQ(slurp(dir_ / "w1" / f), slurp(dir_ / "w3" / f)) << f;
}

TEST_F(CliTest, MissingFileIsSkippedWithPartialExit) {
    const fs::path m = build_cohorts(2, 2);
    spit(m, slurp(m) + "g0/nope.png,g0,fake\n");
    const Result r = vai_run({"score", "--manifest", m.string(), "--out", (dir_ / "o").string()});
    EXPECT_EQ(r.code, vai::cli::kExitPartial);
    const vai::ScoreReport rep = vai::parse_json(slurp(dir_ / "o" / "scores.json"));
    ASSERT_EQ(rep.skipped.size(), 1u);
    EXPECT_EQ(rep.skipped[0].reason, "file not found");
}

TEST_F(CliTest, CorruptFileIsSkipped) {
    const fs::path m = build_cohorts(2, 2);
    spit(dir_ / "g1" / "bad.png", "\x89PNG\r\n\x1a\nnot really");
    spit(m, slurp(m) + "g1/bad.png,g1,fake\n");
    const Result r = vai_run({"score", "--manifest", m.string(), "--out", (dir_ / "o").string()});
    EXPECT_EQ(r.code, vai::cli::kExitPartial);
    EXPECT_EQ(vai::parse_json(slurp(dir_ / "o" / "scores.json")).skipped.size(), 1u);
}

TEST_F(CliTest, NothingReadableIsFatal) {
    spit(dir_ / "manifest.csv", "path,cohort\nmissing.png,a\n");
    const Result r = vai_run({"score", "--manifest", (dir_ / "manifest.csv").string(), "--out", (dir_ / "o").string()});
    EXPECT_EQ(r.code, vai::cli::kExitFatal);
    EXPECT_NE(r.err.find("vai: error:"), std::string::npos);
}

TEST_F(CliTest, BadManifestHeaderIsFatal) {
    spit(dir_ / "manifest.csv", "file,group\nx.png,a\n");
    const Result r = vai_run({"score", "--manifest", (dir_ / "manifest.csv").string(), "--out", (dir_ / "o").string()});
    EXPECT_EQ(r.code, vai::cli::kExitFatal);
    EXPECT_NE(r.err.find("path"), std::string::npos);
}

TEST_F(CliTest, RankPrintsScaledTable) {
    const fs::path m = build_cohorts(3, 2);
    const Result r = vai_run({"rank", "--manifest", m.string(), "--out", (dir_ / "o").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = vai::csv::parse(r.out);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[1].fields[3], "100");
    EXPECT_EQ(rows[1].fields[4], "1");
    EXPECT_EQ(rows[3].fields[3], "0");
    EXPECT_EQ(rows[3].fields[4], "3");
    EXPECT_EQ(r.out, slurp(dir_ / "o" / "scores.csv"));
}

TEST_F(CliTest, IdenticalCohortsTieAndWarn) {
    std::string manifest = "path,cohort\n";
    write_image(dir_ / "x.png", 1, 5);
    write_image(dir_ / "y.png", 0, 6);
    manifest += "x.png,a\nx.png,b\ny.png,c\n";
    spit(dir_ / "manifest.csv", manifest);
    const Result r = vai_run({"rank", "--manifest", (dir_ / "manifest.csv").string(), "--out", (dir_ / "o").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.err.find("cohorts tied at rank"), std::string::npos);
    const vai::ScoreReport rep = vai::parse_json(slurp(dir_ / "o" / "scores.json"));
    int tied = 0;
    for (const auto& c : rep.cohorts) tied += c.tied;
    EXPECT_EQ(tied, 2);
}

TEST_F(CliTest, DirectoryScan) {
    write_image(dir_ / "mj" / "a.png", 1, 1);
    write_image(dir_ / "mj" / "sub" / "b.png", 1, 2);
    write_image(dir_ / "photos" / "c.png", 0, 3);
    const Result r = vai_run({"rank", "--cohort", "mj=" + (dir_ / "mj").string(), "--real", (dir_ / "photos").string(),
                              "--out", (dir_ / "o").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const vai::ScoreReport rep = vai::parse_json(slurp(dir_ / "o" / "scores.json"));
    ASSERT_EQ(rep.images.size(), 3u);
    EXPECT_EQ(rep.images[0].image_id, "a.png");
    EXPECT_EQ(rep.images[1].image_id, "sub/b.png");
    EXPECT_EQ(rep.images[2].label, "real");
}

TEST_F(CliTest, EmitLbp) {
    const fs::path m = build_cohorts(2, 1);
    ASSERT_EQ(vai_run({"score", "--manifest", m.string(), "--out", (dir_ / "o").string(), "--emit-lbp"}).code, 0);
    // lbp/<cohort>/<image_id>.png, where image_id keeps the manifest-relative path.
    EXPECT_TRUE(fs::exists(dir_ / "o" / "lbp" / "g0" / "g0" / "img0.png.png"));
    EXPECT_TRUE(fs::exists(dir_ / "o" / "lbp" / "g1" / "g1" / "img0.png.png"));
}

std::string predictions_2x2() {
    std::string s = "image_id,truth,score,detector,cohort\n";
    for (const std::string d : {"A", "B"}) {
        for (int i = 0; i < 4; ++i) s += "r" + std::to_string(i) + ",real," + (d == "A" ? "0.1" : "0.9") + "," + d + ",real\n";
        for (const std::string g : {"g1", "g2"})
            for (int i = 0; i < 4; ++i)
                s += g + "_" + std::to_string(i) + ",fake," + (g == "g1" || i < 2 ? "0.8" : "0.2") + "," + d + "," + g + "\n";
    }
    return s;
}

TEST_F(CliTest, EvalTwoByTwo) {
    spit(dir_ / "p.csv", predictions_2x2());
    const Result r = vai_run({"eval", "--predictions", (dir_ / "p.csv").string(), "--out", (dir_ / "o").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, slurp(dir_ / "o" / "eval.csv"));
    EXPECT_NE(r.out.find("A,g1,0.5,4,4,4,0,4,0,100.00,100.00,100.00"), std::string::npos);
    EXPECT_NE(r.out.find("B,g2,0.5,4,4,2,4,0,2,25.00,50.00,33.33"), std::string::npos);
    EXPECT_EQ(slurp(dir_ / "o" / "accuracy_heatmap.csv"), "detector,g1,g2\nA,100.00,75.00\nB,50.00,25.00\n");
}

TEST_F(CliTest, EvalAllFakeBalanced) {
    std::string s = "image_id,truth,score,detector,cohort\n";
    for (int i = 0; i < 100; ++i) s += "r" + std::to_string(i) + ",real,0.99,ssp,real\n";
    for (int i = 0; i < 100; ++i) s += "f" + std::to_string(i) + ",fake,0.99,ssp,gen\n";
    spit(dir_ / "p.csv", s);
    const Result r = vai_run({"eval", "--predictions", (dir_ / "p.csv").string(), "--out", (dir_ / "o").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find(",50.00,100.00,50.00"), std::string::npos);
}

TEST_F(CliTest, EvalErrors) {
    spit(dir_ / "bad.csv", "image_id,truth,detector\n");
    const Result bad = vai_run({"eval", "--predictions", (dir_ / "bad.csv").string(), "--out", (dir_ / "o").string()});
    EXPECT_EQ(bad.code, vai::cli::kExitFatal);
    EXPECT_NE(bad.err.find("score"), std::string::npos);

    spit(dir_ / "gap.csv", predictions_2x2() + "zz,real,0.1,A,g3\n");
    EXPECT_EQ(vai_run({"eval", "--predictions", (dir_ / "gap.csv").string(), "--out", (dir_ / "o").string()}).code,
              vai::cli::kExitFatal);
    const Result gaps = vai_run(
        {"eval", "--predictions", (dir_ / "gap.csv").string(), "--out", (dir_ / "o").string(), "--allow-gaps"});
    EXPECT_EQ(gaps.code, vai::cli::kExitPartial);
    EXPECT_NE(gaps.out.find("missing"), std::string::npos);
}

TEST_F(CliTest, EvalDetectorThreshold) {
    spit(dir_ / "p.csv", predictions_2x2());
    const Result r = vai_run({"eval", "--predictions", (dir_ / "p.csv").string(), "--out", (dir_ / "o").string(),
                              "--detector-threshold", "B=0.95"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("B,g1,0.95,4,4,0,0,4,4,50.00,0.00,n/a"), std::string::npos);
}

TEST_F(CliTest, LbpSubcommand) {
    vai::PixelBuffer flat(12, 9, 3);
    for (auto& s : flat.samples()) s = 77;
    vai::write_file(dir_ / "flat.png", vai::encode_png(flat));
    const Result r = vai_run({"lbp", (dir_ / "flat.png").string(), (dir_ / "codes.png").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const vai::PixelBuffer codes = vai::load_image(dir_ / "codes.png");
    EXPECT_EQ(codes.width(), 10);
    EXPECT_EQ(codes.height(), 7);
    for (int y = 0; y < codes.height(); ++y)
        for (int x = 0; x < codes.width(); ++x) EXPECT_EQ(codes.at(x, y, 0), 255);

    EXPECT_EQ(vai_run({"lbp", (dir_ / "none.png").string()}).code, vai::cli::kExitFatal);
    ASSERT_EQ(vai_run({"lbp", (dir_ / "flat.png").string(), "--out", (dir_ / "o").string()}).code, 0);
    EXPECT_TRUE(fs::exists(dir_ / "o" / "lbp" / "flat.png"));
}

TEST_F(CliTest, HelpListsEveryConfigField) {
    const Result r = vai_run({"score", "--help"});
    EXPECT_EQ(r.code, 0);
    const std::string text = r.out + r.err;
    for (const char* flag : {"--resize", "--hsv-bins", "--lbp-bins", "--canny-sigma", "--canny-low", "--canny-high",
                             "--blur-sigma", "--weights", "--workers", "--out", "--threshold", "--config"})
        EXPECT_NE(text.find(flag), std::string::npos) << flag;
    EXPECT_NE(text.find("[default: 512]"), std::string::npos);
}

TEST_F(CliTest, ConfigFileAndFlagsOverride) {
    const fs::path m = build_cohorts(2, 1);
    spit(dir_ / "cfg.json", R"({"resize": 32, "weights": [1,1,1,1,1,1,2]})");
    ASSERT_EQ(vai_run({"score", "--manifest", m.string(), "--config", (dir_ / "cfg.json").string(), "--hsv-bins", "4",
                       "--out", (dir_ / "o").string()})
                  .code,
              0);
    const vai::ScoreReport rep = vai::parse_json(slurp(dir_ / "o" / "scores.json"));
    EXPECT_EQ(rep.config.metrics.resize_longest, 32);
    EXPECT_EQ(rep.config.metrics.hsv_bins, 4);
    EXPECT_EQ(rep.config.weights[6], 2.0);

    spit(dir_ / "bad.json", R"({"resise": 32})");
    EXPECT_EQ(vai_run({"score", "--manifest", m.string(), "--config", (dir_ / "bad.json").string()}).code,
              vai::cli::kExitFatal);
    EXPECT_EQ(vai_run({"score", "--manifest", m.string(), "--weights", "1,2"}).code, vai::cli::kExitFatal);
}

TEST_F(CliTest, BinaryExitCodes) {
    const std::string bin = VAI_BIN;
    EXPECT_EQ(std::system((bin + " --help > /dev/null 2>&1").c_str()), 0);
    const int bad = std::system((bin + " frobnicate > /dev/null 2>&1").c_str());
    EXPECT_TRUE(WIFEXITED(bad));
    EXPECT_EQ(WEXITSTATUS(bad), 2);
    spit(dir_ / "p.csv", predictions_2x2());
    const int ok = std::system((bin + " eval --predictions " + (dir_ / "p.csv").string() + " --out " +
                                (dir_ / "o").string() + " > /dev/null 2>&1")
                                   .c_str());
    EXPECT_EQ(WEXITSTATUS(ok), 0);
}

}  // namespace
