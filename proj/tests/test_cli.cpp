#include "epiclust/ingest.hpp"
#include "oracles.hpp"

#include "json.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <map>
#include <sstream>

using namespace epiclust;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Runs the CLI with stdout/stderr captured into dir; returns the exit status.
int run(const std::string& args, const fs::path& dir) {
    const std::string cmd = std::string("\"") + EPICLUST_CLI_PATH + "\" " + args + " >\"" +
                            (dir / "stdout.txt").string() + "\" 2>\"" + (dir / "stderr.txt").string() + "\"";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::istringstream in(oracle::slurp(p));
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

std::string all_files(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().filename() != "stdout.txt" && e.path().filename() != "stderr.txt")
            files[e.path().filename().string()] = oracle::slurp(e.path());
    std::string out;
    for (const auto& [name, body] : files) out += name + "\n" + body;
    return out;
}

class Cli : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        root_ = oracle::scratch_dir("cli");
        ASSERT_EQ(run("synth --regions 25 --days 120 --k-true 3 --seed 0 --out \"" + (root_ / "fx").string() + "\"",
                      root_),
                  0);
    }
    static fs::path fx(const char* name) { return root_ / "fx" / name; }
    static fs::path out(const std::string& name) {
        auto p = root_ / name;
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }
    static std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

    static fs::path root_;
};

fs::path Cli::root_;

} // namespace

TEST_F(Cli, SynthFilesReparse) {
    auto m = load_epicurves(fx("epicurves.csv"), fx("populations.csv"));
    EXPECT_EQ(m.region_count(), 25u);
    EXPECT_EQ(m.day_count(), 120u);
    auto f = load_features(fx("features.csv"), m);
    EXPECT_EQ(f.feature_names().size(), 11u);
    auto truth = json::parse(oracle::slurp(fx("truth.json")));
    EXPECT_EQ(truth["schema_version"], "1");
    EXPECT_EQ(truth["labels"].size(), 25u);
}

TEST_F(Cli, SynthDeterministic) {
    auto a = out("synth_a"), b = out("synth_b");
    ASSERT_EQ(run("synth --seed 4 --out " + q(a), a), 0);
    ASSERT_EQ(run("synth --seed 4 --out " + q(b), b), 0);
    EXPECT_EQ(all_files(a), all_files(b));
    auto c = out("synth_c");
    ASSERT_EQ(run("synth --seed 5 --out " + q(c), c), 0);
    EXPECT_NE(all_files(a), all_files(c));
}

TEST_F(Cli, SynthSingleTemplate) {
    auto d = out("synth_k1");
    ASSERT_EQ(run("synth --k-true 1 --out " + q(d), d), 0);
    auto truth = json::parse(oracle::slurp(d / "truth.json"));
    for (const auto& l : truth["labels"]) EXPECT_EQ(l, 0);
    auto m = load_epicurves(d / "epicurves.csv");
    for (std::size_t r = 0; r < m.region_count(); ++r) {
        double s = 0;
        for (double x : m.values().row(r)) s += x;
        EXPECT_NEAR(s / static_cast<double>(m.day_count()), 20.0, 5.0);
    }
}

TEST_F(Cli, StabilityFileContract) {
    auto d = out("stab");
    ASSERT_EQ(run("stability --input " + q(fx("epicurves.csv")) +
                      " --prep none,zscore --algo spectral,kmeans --window-len 30 --out " + q(d),
                  d),
              0);
    int csvs = 0;
    for (const auto& e : fs::directory_iterator(d))
        if (e.path().extension() == ".csv") ++csvs;
    EXPECT_EQ(csvs, 4);
    for (const char* name : {"none_spectral", "none_kmeans", "zscore_spectral", "zscore_kmeans"}) {
        auto rows = read_csv(d / ("stability_" + std::string(name) + ".csv"));
        ASSERT_EQ(rows.size(), 5u) << name;
        EXPECT_EQ(rows[0], (std::vector<std::string>{"window", "w0", "w1", "w2", "w3"}));
        for (std::size_t i = 1; i < 5; ++i) {
            ASSERT_EQ(rows[i].size(), 5u);
            EXPECT_EQ(rows[i][i], "0");
        }
    }
    auto summary = json::parse(oracle::slurp(d / "summary.json"));
    EXPECT_EQ(summary["schema_version"], "1");
    EXPECT_EQ(summary["selected"]["name"], "none_spectral");
    EXPECT_EQ(summary["techniques"].size(), 4u);
}

TEST_F(Cli, UnreadableInput) {
    auto d = out("bad_input");
    EXPECT_EQ(run("stability --input " + q(d / "nope.csv") + " --out " + q(d), d), 2);
    EXPECT_FALSE(oracle::slurp(d / "stderr.txt").empty());
    EXPECT_FALSE(fs::exists(d / "summary.json"));
}

TEST_F(Cli, BadArguments) {
    auto d = out("bad_args");
    EXPECT_EQ(run("stability --input " + q(fx("epicurves.csv")) + " --prep logit --out " + q(d), d), 2);
    EXPECT_EQ(run("stability --input " + q(fx("epicurves.csv")) + " --k 0 --out " + q(d), d), 2);
    EXPECT_EQ(run("frobnicate", d), 2);
    EXPECT_EQ(run("--help", d), 0);
}

TEST_F(Cli, AssociateGridAndRanking) {
    auto d = out("assoc");
    ASSERT_EQ(run("associate --input " + q(fx("epicurves.csv")) + " --features " + q(fx("features.csv")) +
                      " --trials 100 --seed 7 --out " + q(d),
                  d),
              0);
    auto rows = read_csv(d / "association.csv");
    ASSERT_EQ(rows.size(), 45u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"feature", "window", "sm1", "sm2_mean", "sm2_std", "deviation"}));

    auto truth = json::parse(oracle::slurp(fx("truth.json")));
    std::vector<std::string> correlated = truth["correlated_features"];
    std::map<std::string, double> best_corr_min, noise_max;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const double dev = std::stod(r[5]);
        EXPECT_NEAR(dev, std::stod(r[3]) - std::stod(r[2]), 1e-12);
        const bool corr = std::find(correlated.begin(), correlated.end(), r[0]) != correlated.end();
        auto& slot = corr ? best_corr_min : noise_max;
        if (!slot.count(r[1]))
            slot[r[1]] = dev;
        else
            slot[r[1]] = corr ? std::min(slot[r[1]], dev) : std::max(slot[r[1]], dev);
    }
    ASSERT_EQ(best_corr_min.size(), 4u);
    for (const auto& [w, dev] : best_corr_min) EXPECT_GT(dev, noise_max[w]) << "window " << w;

    auto report = json::parse(oracle::slurp(d / "association.json"));
    EXPECT_EQ(report["schema_version"], "1");
    EXPECT_EQ(report["cells"].size(), 44u);
    EXPECT_EQ(report["cells"][0]["permutation"].size(), 3u);
}

TEST_F(Cli, AssociateByteIdentical) {
    auto a = out("assoc_a"), b = out("assoc_b");
    const std::string args = "associate --input " + q(fx("epicurves.csv")) + " --features " + q(fx("features.csv")) +
                             " --populations " + q(fx("populations.csv")) + " --trials 100 --seed 7 --out ";
    ASSERT_EQ(run(args + q(a), a), 0);
    ASSERT_EQ(run(args + q(b), b), 0);
    EXPECT_EQ(all_files(a), all_files(b));
    EXPECT_FALSE(all_files(a).empty());
}

TEST_F(Cli, ClusterLabels) {
    auto d = out("labels");
    ASSERT_EQ(run("cluster --input " + q(fx("epicurves.csv")) + " --prep none --algo spectral --out " + q(d), d), 0);
    auto rows = read_csv(d / "labels.csv");
    ASSERT_EQ(rows.size(), 1u + 25u * 4u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"region", "window", "label"}));
    auto j = json::parse(oracle::slurp(d / "labels.json"));
    EXPECT_EQ(j["schema_version"], "1");
}

TEST_F(Cli, ConfigFile) {
    auto d = out("config");
    json cfg = {{"input", fx("epicurves.csv").string()},
                {"out", d.string()},
                {"window_len", 60},
                {"prep", {"none"}},
                {"algo", {"kmeans"}},
                {"kmeans", {{"restarts", 3}}},
                {"spectral", {{"laplacian", "unnormalized"}}}};
    oracle::spit(d / "cfg.json", cfg.dump());
    ASSERT_EQ(run("stability --config " + q(d / "cfg.json"), d), 0) << oracle::slurp(d / "stderr.txt");
    auto rows = read_csv(d / "stability_none_kmeans.csv");
    EXPECT_EQ(rows.size(), 3u);
    auto summary = json::parse(oracle::slurp(d / "summary.json"));
    EXPECT_EQ(summary["config"]["window_len"], 60);
    EXPECT_EQ(summary["config"]["kmeans"]["restarts"], 3);

    // flags override the file
    auto e = out("config_override");
    ASSERT_EQ(run("stability --config " + q(d / "cfg.json") + " --window-len 30 --out " + q(e), e), 0);
    EXPECT_EQ(read_csv(e / "stability_none_kmeans.csv").size(), 5u);

    json bad = cfg;
    bad["colour"] = "red";
    oracle::spit(d / "bad.json", bad.dump());
    EXPECT_EQ(run("stability --config " + q(d / "bad.json"), d), 2);
}

TEST_F(Cli, HeatmapAndDroppedDays) {
    auto g = out("fx121");
    ASSERT_EQ(run("synth --days 121 --out " + q(g), g), 0);
    auto d = out("heat");
    ASSERT_EQ(run("stability --input " + q(g / "epicurves.csv") + " --prep none --algo spectral --heatmap --out " +
                      q(d),
                  d),
              0);
    EXPECT_TRUE(fs::exists(d / "stability_none_spectral.svg"));
    EXPECT_NE(oracle::slurp(d / "stability_none_spectral.svg").find("<svg"), std::string::npos);
    EXPECT_NE(oracle::slurp(d / "stderr.txt").find("1"), std::string::npos);
    auto summary = json::parse(oracle::slurp(d / "summary.json"));
    EXPECT_EQ(summary["dropped_days"], 1);
}
