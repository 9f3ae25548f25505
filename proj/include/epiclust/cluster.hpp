#pragma once

#include "epiclust/linalg.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace epiclust {

using Point = std::vector<double>;
using Labels = std::vector<std::size_t>;

enum class Algorithm { kmeans, spectral, scalar_ordered };

std::string_view to_string(Algorithm algo);
/// Accepts `kmeans|spectral`; `scalar_ordered` is internal to feature clustering.
Algorithm parse_algorithm(std::string_view name);

struct ClusterAssignment {
    Labels labels;
    std::size_t k = 0;
    /// In the space that was clustered (embedding space for spectral).
    std::vector<Point> centroids;
    Algorithm algorithm = Algorithm::kmeans;
    double inertia = 0.0;

    /// Number of members per label, length k.
    std::vector<std::size_t> cluster_sizes() const;
};

struct KMeansConfig {
    std::size_t k = 3;
    /// Convergence threshold on the largest centroid displacement.
    double epsilon = 1e-6;
    int max_iters = 300;
    int restarts = 10;
    std::uint64_t seed = 0;
};

/// Per-restart inertia after every Lloyd update, for diagnostics.
struct KMeansTrace {
    std::vector<std::vector<double>> inertia_history;
    std::size_t best_restart = 0;
};

/// Gaussian kernel bandwidth: fixed, or the median of nonzero pairwise distances.
struct Bandwidth {
    bool use_median = true;
    double value = 0.0;

    static Bandwidth median() { return {}; }
    static Bandwidth fixed(double sigma) { return {false, sigma}; }
};

enum class LaplacianKind { unnormalized, symmetric_normalized };

std::string_view to_string(LaplacianKind kind);
LaplacianKind parse_laplacian_kind(std::string_view name);

struct SpectralConfig {
    std::size_t k = 3;
    Bandwidth sigma;
    LaplacianKind laplacian = LaplacianKind::symmetric_normalized;
    KMeansConfig kmeans;
};

struct SpectralResult {
    ClusterAssignment assignment;
    /// Ascending Laplacian spectrum.
    std::vector<double> eigenvalues;
    /// Eigengap suggestion; informational only, the configured k is used.
    std::size_t suggested_k = 1;
    double sigma = 0.0;
};

/// Lloyd's algorithm with k-means++ seeding and `cfg.restarts` independent
/// restarts; the lowest inertia wins (ties go to the earlier restart). An
/// empty cluster is re-seeded with the point farthest from its centroid.
/// The returned labels are the nearest final centroid for every point.
ClusterAssignment kmeans(std::span<const Point> points, const KMeansConfig& cfg, KMeansTrace* trace = nullptr);

/// Resolves the median bandwidth for `points`; 1.0 if all points coincide.
double median_pairwise_distance(std::span<const Point> points);

/// w_ij = exp(-|x_i - x_j|^2 / (2 sigma^2)) with a zero diagonal.
SymmetricMatrix rbf_affinity(std::span<const Point> points, Bandwidth sigma);

/// D - W, or I - D^-1/2 W D^-1/2. In the normalized form an isolated vertex
/// gets an all-zero row so that it still contributes a zero eigenvalue.
SymmetricMatrix laplacian(const SymmetricMatrix& w, LaplacianKind kind);

/// Number of eigenvalues before the largest gap among the first k_max + 1.
std::size_t eigengap_suggest_k(std::span<const double> eigenvalues, std::size_t k_max);

SpectralResult spectral_cluster(std::span<const Point> points, const SpectralConfig& cfg);

/// 1-D k-means whose labels are ordered by centroid: label 0 holds the
/// smallest values. Monotone in the input values.
ClusterAssignment cluster_scalar_feature(std::span<const double> values, std::size_t k, const KMeansConfig& cfg);

/// Rows of `m` as points.
std::vector<Point> rows_as_points(const Matrix& m);

} // namespace epiclust
