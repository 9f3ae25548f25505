#include "epiclust/pipeline.hpp"

#include "epiclust/random.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace epiclust {

std::string technique_name(const Technique& t) {
    return std::string(to_string(t.prep)) + "_" + std::string(to_string(t.algo));
}

std::string_view to_string(PrepScope scope) {
    return scope == PrepScope::per_window ? "per_window" : "full_series";
}

PrepScope parse_prep_scope(std::string_view name) {
    if (name == "per_window") {
        return PrepScope::per_window;
    }
    if (name == "full_series") {
        return PrepScope::full_series;
    }
    throw std::invalid_argument("unknown preprocessing scope '" + std::string(name) +
                                "' (expected per_window|full_series)");
}

RegionClustering cluster_regions(const Matrix& observations, Algorithm algo, const PipelineConfig& cfg) {
    const auto points = rows_as_points(observations);
    KMeansConfig km = cfg.kmeans;
    km.k = cfg.k;
    switch (algo) {
    case Algorithm::kmeans: return RegionClustering{kmeans(points, km), std::nullopt};
    case Algorithm::spectral: {
        SpectralConfig sc;
        sc.k = cfg.k;
        sc.sigma = cfg.sigma;
        sc.laplacian = cfg.laplacian;
        sc.kmeans = km;
        auto result = spectral_cluster(points, sc);
        return RegionClustering{std::move(result.assignment), result.suggested_k};
    }
    case Algorithm::scalar_ordered: break;
    }
    throw std::invalid_argument("cluster_regions: epicurves are clustered with kmeans or spectral only");
}

WindowClustering cluster_windows(const EpicurveMatrix& m, const Technique& technique, const PipelineConfig& cfg) {
    WindowClustering out;
    if (cfg.prep_scope == PrepScope::full_series) {
        out.split = split_windows(apply_preprocess(m, technique.prep), cfg.window_len);
    } else {
        out.split = split_windows(m, cfg.window_len);
        for (auto& w : out.split.windows) {
            w.data = apply_preprocess(w.data, technique.prep);
        }
    }
    out.clusterings.reserve(out.split.windows.size());
    for (const auto& w : out.split.windows) {
        out.clusterings.push_back(cluster_regions(w.data.values(), technique.algo, cfg));
    }
    return out;
}

double StabilityMatrix::mean_off_diagonal() const {
    if (window_count < 2) {
        return 0.0;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < window_count; ++i) {
        for (std::size_t j = 0; j < window_count; ++j) {
            if (i != j) {
                sum += costs(i, j);
            }
        }
    }
    return sum / static_cast<double>(window_count * (window_count - 1));
}

bool StabilityMatrix::any_degenerate() const {
    return std::any_of(balance.begin(), balance.end(), [](const BalanceDiagnostic& b) { return b.degenerate; });
}

double StabilityMatrix::worst_fraction() const {
    double worst = 0.0;
    for (const auto& b : balance) {
        worst = std::max(worst, b.largest_fraction);
    }
    return worst;
}

std::vector<StabilityMatrix> temporal_stability(const EpicurveMatrix& m, std::span<const PreprocessKind> preps,
                                                std::span<const Algorithm> algos, const PipelineConfig& cfg) {
    if (preps.empty() || algos.empty()) {
        throw std::invalid_argument("temporal_stability: needs at least one preprocessing and one algorithm");
    }
    std::vector<StabilityMatrix> results;
    for (auto prep : preps) {
        for (auto algo : algos) {
            const Technique technique{prep, algo};
            const auto wc = cluster_windows(m, technique, cfg);
            const std::size_t count = wc.split.windows.size();
            if (count < 2) {
                throw std::invalid_argument("temporal_stability: needs at least 2 windows, got " +
                                            std::to_string(count));
            }
            StabilityMatrix s;
            s.technique = technique;
            s.window_count = count;
            s.costs = Matrix(count, count);
            s.dropped_days = wc.split.dropped_days;
            for (const auto& c : wc.clusterings) {
                s.window_labels.push_back(c.assignment.labels);
                s.balance.push_back(balance_check(c.assignment, cfg.balance_threshold));
                s.suggested_k.push_back(c.suggested_k);
            }
            for (std::size_t i = 0; i < count; ++i) {
                for (std::size_t j = i + 1; j < count; ++j) {
                    const double cost =
                        best_permutation_dissimilarity(s.window_labels[j], s.window_labels[i], cfg.k, cfg.metric)
                            .cost;
                    s.costs(i, j) = cost;
                    s.costs(j, i) = cost;
                }
            }
            results.push_back(std::move(s));
        }
    }
    return results;
}

TechniqueSelection select_technique(std::span<const StabilityMatrix> results) {
    if (results.empty()) {
        throw std::invalid_argument("select_technique: no candidates");
    }
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (results[i].any_degenerate()) {
            continue;
        }
        if (!best || results[i].mean_off_diagonal() < results[*best].mean_off_diagonal()) {
            best = i;
        }
    }
    if (best) {
        return TechniqueSelection{*best, results[*best].technique, false};
    }
    // Least degenerate: smallest worst-window fraction, then lowest cost.
    std::size_t fallback = 0;
    for (std::size_t i = 1; i < results.size(); ++i) {
        const double fi = results[i].worst_fraction();
        const double ff = results[fallback].worst_fraction();
        if (fi < ff || (fi == ff && results[i].mean_off_diagonal() < results[fallback].mean_off_diagonal())) {
            fallback = i;
        }
    }
    return TechniqueSelection{fallback, results[fallback].technique, true};
}

AssociationReport feature_association(const EpicurveMatrix& m, const FeatureTable& f, const Technique& chosen,
                                      const PipelineConfig& cfg) {
    if (f.region_names() != m.region_names()) {
        throw std::invalid_argument("feature_association: feature rows are not aligned with the epicurves");
    }
    AssociationReport report;
    report.chosen = chosen;
    report.k = cfg.k;
    report.metric = cfg.metric;
    report.trials = cfg.trials;
    report.seed = cfg.seed;

    auto wc = cluster_windows(m, chosen, cfg);
    report.dropped_days = wc.split.dropped_days;
    for (std::size_t w = 0; w < wc.split.windows.size(); ++w) {
        const auto& window = wc.split.windows[w];
        auto balance = balance_check(wc.clusterings[w].assignment, cfg.balance_threshold);
        report.windows.push_back(
            AssociationWindow{window.index, window.start_date, window.end_date, std::move(wc.clusterings[w]), balance});
    }

    KMeansConfig km = cfg.kmeans;
    for (std::size_t j = 0; j < f.feature_names().size(); ++j) {
        const auto values = f.column(j);
        const std::set<double> distinct(values.begin(), values.end());
        const std::size_t effective_k = std::min(cfg.k, distinct.size());
        auto assignment = cluster_scalar_feature(values, effective_k, km);
        // Compared in the epidemic label space [0, k).
        assignment.k = cfg.k;
        FeatureClustering fc{f.feature_names()[j], std::move(assignment), effective_k, {}};
        fc.balance = balance_check(fc.assignment, cfg.balance_threshold);
        report.features.push_back(std::move(fc));
    }

    std::vector<BaselineResult> baselines;
    for (std::size_t w = 0; w < report.windows.size(); ++w) {
        BaselineOptions options;
        options.trials = cfg.trials;
        options.seed = derive_seed(cfg.seed, {static_cast<std::uint64_t>(w)});
        options.metric = cfg.metric;
        options.mode = cfg.baseline;
        baselines.push_back(random_baseline(report.windows[w].epidemic.assignment.labels, cfg.k, options));
    }

    for (std::size_t j = 0; j < report.features.size(); ++j) {
        const auto& feature_labels = report.features[j].assignment.labels;
        for (std::size_t w = 0; w < report.windows.size(); ++w) {
            const auto& epi = report.windows[w].epidemic.assignment.labels;
            AssociationCell cell;
            cell.feature = j;
            cell.window = w;
            cell.alignment = best_permutation_dissimilarity(feature_labels, epi, cfg.k, cfg.metric);
            cell.sm1_mismatch = best_permutation_dissimilarity(feature_labels, epi, cfg.k, Metric::mismatch).cost;
            cell.baseline = with_sm1(baselines[w], cell.alignment.cost);
            report.cells.push_back(std::move(cell));
        }
    }
    return report;
}

} // namespace epiclust
