#include "epiclust/cli.hpp"

#include "epiclust/error.hpp"
#include "epiclust/report.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace epiclust {

namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << contents;
    out.close();
    if (!out) {
        throw Error("failed to write " + path.string());
    }
}

template <typename Writer>
void write_file_with(const fs::path& path, Writer&& writer) {
    std::ostringstream buffer;
    writer(buffer);
    write_file(path, buffer.str());
}

void require_file(const fs::path& path, const char* what) {
    std::ifstream probe(path);
    if (!probe) {
        throw InputError(std::string("cannot read ") + what + " file " + path.string());
    }
}

void prepare_output(const fs::path& out) {
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec || !fs::is_directory(out)) {
        throw InputError("output directory " + out.string() + " is not usable");
    }
}

EpicurveMatrix load_inputs(const RunConfig& cfg) {
    require_file(cfg.input, "input");
    if (cfg.populations) {
        require_file(*cfg.populations, "population");
    }
    if (cfg.features) {
        require_file(*cfg.features, "feature");
    }
    prepare_output(cfg.out);
    return load_epicurves(cfg.input, cfg.populations);
}

void warn_dropped(std::size_t dropped) {
    if (dropped > 0) {
        std::cerr << "warning: " << dropped << " trailing day(s) do not fill a window and were dropped\n";
    }
}

template <typename Enum, typename Parse>
std::vector<Enum> parse_list(const nlohmann::json& value, Parse parse) {
    std::vector<Enum> out;
    if (value.is_string()) {
        out.push_back(parse(value.get<std::string>()));
    } else {
        for (const auto& item : value) {
            out.push_back(parse(item.get<std::string>()));
        }
    }
    return out;
}

Bandwidth parse_sigma(const std::string& text) {
    if (text == "median") {
        return Bandwidth::median();
    }
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || !(value > 0.0)) {
        throw std::invalid_argument("sigma must be a positive number or 'median', got '" + text + "'");
    }
    return Bandwidth::fixed(value);
}

void check_keys(const nlohmann::json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* a : allowed) {
            known = known || key == a;
        }
        if (!known) {
            throw std::invalid_argument("unknown config key '" + where + key + "'");
        }
    }
}

int report_failure(const std::exception& e, int status) {
    std::cerr << "error: " << e.what() << '\n';
    return status;
}

template <typename Body>
int guarded(Body&& body) {
    try {
        return body();
    } catch (const InputError& e) {
        return report_failure(e, 2);
    } catch (const std::invalid_argument& e) {
        return report_failure(e, 2);
    } catch (const fs::filesystem_error& e) {
        return report_failure(e, 2);
    } catch (const std::exception& e) {
        return report_failure(e, 1);
    }
}

} // namespace

void apply_config_file(const fs::path& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot read config file " + path.string());
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError("config file " + path.string() + ": " + e.what());
    }
    if (!j.is_object()) {
        throw InputError("config file " + path.string() + ": top level must be an object");
    }
    check_keys(j,
               {"input", "features", "populations", "out", "window_len", "k", "prep", "algo", "trials", "seed",
                "balance_threshold", "metric", "prep_scope", "baseline", "heatmap", "kmeans", "spectral"},
               "");
    try {
        auto& p = cfg.pipeline;
        if (j.contains("input")) cfg.input = j["input"].get<std::string>();
        if (j.contains("features")) cfg.features = j["features"].get<std::string>();
        if (j.contains("populations")) cfg.populations = j["populations"].get<std::string>();
        if (j.contains("out")) cfg.out = j["out"].get<std::string>();
        if (j.contains("window_len")) p.window_len = j["window_len"].get<std::size_t>();
        if (j.contains("k")) p.k = j["k"].get<std::size_t>();
        if (j.contains("prep")) cfg.preps = parse_list<PreprocessKind>(j["prep"], parse_preprocess_kind);
        if (j.contains("algo")) cfg.algos = parse_list<Algorithm>(j["algo"], parse_algorithm);
        if (j.contains("trials")) p.trials = j["trials"].get<std::size_t>();
        if (j.contains("seed")) {
            p.seed = j["seed"].get<std::uint64_t>();
            p.kmeans.seed = p.seed;
        }
        if (j.contains("balance_threshold")) p.balance_threshold = j["balance_threshold"].get<double>();
        if (j.contains("metric")) p.metric = parse_metric(j["metric"].get<std::string>());
        if (j.contains("prep_scope")) p.prep_scope = parse_prep_scope(j["prep_scope"].get<std::string>());
        if (j.contains("baseline")) p.baseline = parse_baseline_mode(j["baseline"].get<std::string>());
        if (j.contains("heatmap")) cfg.heatmap = j["heatmap"].get<bool>();
        if (j.contains("kmeans")) {
            const auto& km = j["kmeans"];
            check_keys(km, {"epsilon", "max_iters", "restarts", "seed"}, "kmeans.");
            if (km.contains("epsilon")) p.kmeans.epsilon = km["epsilon"].get<double>();
            if (km.contains("max_iters")) p.kmeans.max_iters = km["max_iters"].get<int>();
            if (km.contains("restarts")) p.kmeans.restarts = km["restarts"].get<int>();
            if (km.contains("seed")) p.kmeans.seed = km["seed"].get<std::uint64_t>();
        }
        if (j.contains("spectral")) {
            const auto& sp = j["spectral"];
            check_keys(sp, {"sigma", "laplacian"}, "spectral.");
            if (sp.contains("sigma")) {
                p.sigma = sp["sigma"].is_string() ? parse_sigma(sp["sigma"].get<std::string>())
                                                  : Bandwidth::fixed(sp["sigma"].get<double>());
            }
            if (sp.contains("laplacian")) p.laplacian = parse_laplacian_kind(sp["laplacian"].get<std::string>());
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError("config file " + path.string() + ": " + e.what());
    }
}

int cmd_stability(const RunConfig& cfg) {
    return guarded([&] {
        const auto m = load_inputs(cfg);
        const auto results = temporal_stability(m, cfg.preps, cfg.algos, cfg.pipeline);
        const auto selection = select_technique(results);
        warn_dropped(results.front().dropped_days);
        if (selection.all_degenerate) {
            std::cerr << "warning: every technique has a degenerate window; chose the least degenerate\n";
        }
        for (const auto& s : results) {
            const auto name = technique_name(s.technique);
            write_file_with(cfg.out / ("stability_" + name + ".csv"),
                            [&](std::ostream& out) { write_stability_csv(out, s); });
            if (cfg.heatmap) {
                std::vector<std::string> labels;
                for (std::size_t w = 0; w < s.window_count; ++w) {
                    labels.push_back("w" + std::to_string(w));
                }
                write_file(cfg.out / ("stability_" + name + ".svg"), heatmap_svg(s.costs, labels, name));
            }
        }
        write_file(cfg.out / "summary.json", stability_summary_json(results, selection, m, cfg.pipeline));
        std::cout << "selected " << technique_name(selection.technique) << " (mean off-diagonal cost "
                  << format_number(results[selection.index].mean_off_diagonal()) << ")\n";
        return 0;
    });
}

int cmd_associate(const RunConfig& cfg) {
    return guarded([&] {
        if (!cfg.features) {
            throw InputError("associate needs --features");
        }
        const auto m = load_inputs(cfg);
        const auto features = load_features(*cfg.features, m);
        Technique chosen{cfg.preps.front(), cfg.algos.front()};
        if (cfg.preps.size() * cfg.algos.size() > 1) {
            const auto results = temporal_stability(m, cfg.preps, cfg.algos, cfg.pipeline);
            const auto selection = select_technique(results);
            if (selection.all_degenerate) {
                std::cerr << "warning: every technique has a degenerate window; chose the least degenerate\n";
            }
            chosen = selection.technique;
        }
        const auto report = feature_association(m, features, chosen, cfg.pipeline);
        warn_dropped(report.dropped_days);
        for (const auto& f : report.features) {
            if (f.balance.degenerate) {
                std::cerr << "warning: feature '" << f.name << "' clusters are degenerate (largest fraction "
                          << format_number(f.balance.largest_fraction) << ")\n";
            }
        }
        write_file_with(cfg.out / "association.csv", [&](std::ostream& out) { write_association_csv(out, report); });
        write_file(cfg.out / "association.json", association_json(report, m));
        std::cout << "association computed with " << technique_name(chosen) << '\n';
        return 0;
    });
}

int cmd_cluster(const RunConfig& cfg) {
    return guarded([&] {
        const auto m = load_inputs(cfg);
        const Technique technique{cfg.preps.front(), cfg.algos.front()};
        const auto wc = cluster_windows(m, technique, cfg.pipeline);
        warn_dropped(wc.split.dropped_days);
        write_file_with(cfg.out / "labels.csv", [&](std::ostream& out) { write_labels_csv(out, m, wc); });
        write_file(cfg.out / "labels.json", labels_json(m, wc, technique, cfg.pipeline));
        return 0;
    });
}

int cmd_synth(const SynthConfig& cfg, const fs::path& out_dir) {
    return guarded([&] {
        prepare_output(out_dir);
        write_fixture(generate_fixture(cfg), cfg, out_dir);
        return 0;
    });
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Cluster regions by epidemic curves and compare them with socio-economic features"};
    app.require_subcommand(1);

    SynthConfig synth;
    std::string synth_out = ".";
    auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic planted-cluster fixture");
    synth_cmd->add_option("--regions", synth.n_regions, "Number of regions")->capture_default_str();
    synth_cmd->add_option("--days", synth.n_days, "Number of days")->capture_default_str();
    synth_cmd->add_option("--k-true", synth.k_true, "Planted cluster count")->capture_default_str();
    synth_cmd->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
    synth_cmd->add_option("--out", synth_out, "Output directory")->capture_default_str();

    // Shared analysis flags; values are applied over the config file only when given.
    std::string config_path;
    std::string input;
    std::string features;
    std::string populations;
    std::string out;
    std::size_t window_len = 0;
    std::size_t k = 0;
    std::vector<std::string> preps;
    std::vector<std::string> algos;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::string metric;
    double balance = 0.0;
    std::string sigma;
    std::string laplacian_kind;
    std::string prep_scope;
    std::string baseline;
    double epsilon = 0.0;
    int max_iters = 0;
    int restarts = 0;
    bool heatmap = false;

    std::vector<CLI::App*> analysis;
    for (const auto& [name, help] : {std::pair{"cluster", "Cluster every window with one technique"},
                                     std::pair{"stability", "Cross-window stability of every technique"},
                                     std::pair{"associate", "Feature association against a Monte Carlo baseline"}}) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--input", input, "Epicurve CSV");
        sub->add_option("--features", features, "Feature CSV");
        sub->add_option("--populations", populations, "Population CSV");
        sub->add_option("--out", out, "Output directory");
        sub->add_option("--window-len", window_len, "Window length in days (default 30)");
        sub->add_option("--k", k, "Cluster count (default 3)");
        sub->add_option("--prep", preps, "none|population|zscore|minmax_row|minmax_global")->delimiter(',');
        sub->add_option("--algo", algos, "kmeans|spectral")->delimiter(',');
        sub->add_option("--trials", trials, "Monte Carlo trials (default 100)");
        sub->add_option("--seed", seed, "Random seed (default 0)");
        sub->add_option("--metric", metric, "squared|mismatch");
        sub->add_option("--balance-threshold", balance, "Largest-cluster fraction flagged degenerate (default 0.8)");
        sub->add_option("--sigma", sigma, "Affinity bandwidth or 'median'");
        sub->add_option("--laplacian", laplacian_kind, "unnormalized|symmetric_normalized");
        sub->add_option("--prep-scope", prep_scope, "per_window|full_series");
        sub->add_option("--baseline", baseline, "uniform|shuffle");
        sub->add_option("--epsilon", epsilon, "k-means convergence threshold");
        sub->add_option("--max-iters", max_iters, "k-means iteration cap");
        sub->add_option("--restarts", restarts, "k-means restarts");
        sub->add_flag("--heatmap", heatmap, "Also write SVG heatmaps");
        analysis.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (synth_cmd->parsed()) {
        return cmd_synth(synth, synth_out);
    }

    CLI::App* sub = nullptr;
    for (auto* candidate : analysis) {
        if (candidate->parsed()) {
            sub = candidate;
        }
    }
    auto given = [sub](const char* flag) { return sub->get_option(flag)->count() > 0; };

    RunConfig cfg;
    const int status = guarded([&] {
        if (given("--config")) {
            apply_config_file(config_path, cfg);
        }
        auto& p = cfg.pipeline;
        if (given("--input")) cfg.input = input;
        if (given("--features")) cfg.features = features;
        if (given("--populations")) cfg.populations = populations;
        if (given("--out")) cfg.out = out;
        if (given("--window-len")) p.window_len = window_len;
        if (given("--k")) p.k = k;
        if (given("--prep")) {
            cfg.preps.clear();
            for (const auto& name : preps) cfg.preps.push_back(parse_preprocess_kind(name));
        } else if (cfg.populations && !given("--config")) {
            cfg.preps.insert(cfg.preps.begin() + 1, PreprocessKind::population);
        }
        if (given("--algo")) {
            cfg.algos.clear();
            for (const auto& name : algos) cfg.algos.push_back(parse_algorithm(name));
        }
        if (given("--trials")) p.trials = trials;
        if (given("--seed")) {
            p.seed = seed;
            p.kmeans.seed = seed;
        }
        if (given("--metric")) p.metric = parse_metric(metric);
        if (given("--balance-threshold")) p.balance_threshold = balance;
        if (given("--sigma")) p.sigma = parse_sigma(sigma);
        if (given("--laplacian")) p.laplacian = parse_laplacian_kind(laplacian_kind);
        if (given("--prep-scope")) p.prep_scope = parse_prep_scope(prep_scope);
        if (given("--baseline")) p.baseline = parse_baseline_mode(baseline);
        if (given("--epsilon")) p.kmeans.epsilon = epsilon;
        if (given("--max-iters")) p.kmeans.max_iters = max_iters;
        if (given("--restarts")) p.kmeans.restarts = restarts;
        if (heatmap) cfg.heatmap = true;
        if (cfg.input.empty()) {
            throw InputError("--input is required");
        }
        if (cfg.preps.empty() || cfg.algos.empty()) {
            throw std::invalid_argument("at least one --prep and one --algo are required");
        }
        return 0;
    });
    if (status != 0) {
        return status;
    }

    const std::string name = sub->get_name();
    if (name == "stability") {
        return cmd_stability(cfg);
    }
    if (name == "associate") {
        return cmd_associate(cfg);
    }
    return cmd_cluster(cfg);
}

} // namespace epiclust
