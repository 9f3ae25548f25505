#pragma once

#include "epiclust/align.hpp"
#include "epiclust/cluster.hpp"
#include "epiclust/ingest.hpp"
#include "epiclust/preprocess.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace epiclust {

struct Technique {
    PreprocessKind prep = PreprocessKind::none;
    Algorithm algo = Algorithm::spectral;

    friend bool operator==(const Technique&, const Technique&) = default;
};

/// `<prep>_<algo>`, e.g. `none_spectral`.
std::string technique_name(const Technique& t);

/// Whether preprocessing runs on each window separately or on the full series
/// before windowing.
enum class PrepScope { per_window, full_series };

std::string_view to_string(PrepScope scope);
PrepScope parse_prep_scope(std::string_view name);

struct PipelineConfig {
    std::size_t window_len = 30;
    std::size_t k = 3;
    /// Its k is overridden by `k`.
    KMeansConfig kmeans;
    Bandwidth sigma;
    LaplacianKind laplacian = LaplacianKind::symmetric_normalized;
    PrepScope prep_scope = PrepScope::per_window;
    double balance_threshold = 0.8;
    Metric metric = Metric::squared;
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    BaselineMode baseline = BaselineMode::uniform;
};

/// One clustering of a set of regions, with the eigengap suggestion when the
/// algorithm is spectral.
struct RegionClustering {
    ClusterAssignment assignment;
    std::optional<std::size_t> suggested_k;
};

RegionClustering cluster_regions(const Matrix& observations, Algorithm algo, const PipelineConfig& cfg);

struct WindowClustering {
    WindowSplit split;
    std::vector<RegionClustering> clusterings;
};

/// Windows the matrix, preprocesses per `cfg.prep_scope`, clusters each window.
WindowClustering cluster_windows(const EpicurveMatrix& m, const Technique& technique, const PipelineConfig& cfg);

struct StabilityMatrix {
    Technique technique;
    std::size_t window_count = 0;
    /// costs(i, j) for i < j aligns window j's labels onto window i's; the
    /// lower triangle mirrors it.
    Matrix costs;
    std::vector<BalanceDiagnostic> balance;
    std::vector<Labels> window_labels;
    std::vector<std::optional<std::size_t>> suggested_k;
    std::size_t dropped_days = 0;

    double mean_off_diagonal() const;
    bool any_degenerate() const;
    double worst_fraction() const;
};

/// One matrix per (prep, algo) pair, preps outer and algos inner.
std::vector<StabilityMatrix> temporal_stability(const EpicurveMatrix& m, std::span<const PreprocessKind> preps,
                                                std::span<const Algorithm> algos, const PipelineConfig& cfg);

struct TechniqueSelection {
    std::size_t index = 0;
    Technique technique;
    /// Every candidate had a degenerate window; the least degenerate was chosen.
    bool all_degenerate = false;
};

/// Lowest mean off-diagonal cost among candidates with no degenerate window,
/// ties to the earlier candidate.
TechniqueSelection select_technique(std::span<const StabilityMatrix> results);

struct AssociationWindow {
    std::size_t index = 0;
    Date start_date;
    Date end_date;
    RegionClustering epidemic;
    BalanceDiagnostic balance;
};

struct FeatureClustering {
    std::string name;
    ClusterAssignment assignment;
    /// min(k, number of distinct values).
    std::size_t effective_k = 0;
    BalanceDiagnostic balance;
};

struct AssociationCell {
    std::size_t feature = 0;
    std::size_t window = 0;
    AlignmentResult alignment;
    /// Mismatch-rate SM1 under the same best permutation search, reported alongside.
    double sm1_mismatch = 0.0;
    BaselineResult baseline;
};

struct AssociationReport {
    Technique chosen;
    std::size_t k = 0;
    Metric metric = Metric::squared;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::size_t dropped_days = 0;
    std::vector<AssociationWindow> windows;
    std::vector<FeatureClustering> features;
    /// Feature-major: cell (f, w) at f * windows.size() + w.
    std::vector<AssociationCell> cells;

    const AssociationCell& cell(std::size_t feature, std::size_t window) const {
        return cells.at(feature * windows.size() + window);
    }
};

/// Clusters every window with `chosen`, clusters every feature column on the
/// ordered scalar path, and compares them. The Monte Carlo draws for window w
/// come from stream (seed, w) and are shared by all features of that window.
AssociationReport feature_association(const EpicurveMatrix& m, const FeatureTable& f, const Technique& chosen,
                                      const PipelineConfig& cfg);

} // namespace epiclust
