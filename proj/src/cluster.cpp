#include "epiclust/cluster.hpp"

#include "epiclust/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace epiclust {

namespace {

double squared_distance(std::span<const double> x, std::span<const double> y) {
    double sum = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d) {
        const double diff = x[d] - y[d];
        sum += diff * diff;
    }
    return sum;
}

// Nearest centroid, ties to the lowest index.
std::size_t nearest(std::span<const double> x, const std::vector<Point>& centroids, double* dist = nullptr) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.size(); ++c) {
        const double d = squared_distance(x, centroids[c]);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    if (dist != nullptr) {
        *dist = best_d;
    }
    return best;
}

double total_inertia(std::span<const Point> points, const Labels& labels, const std::vector<Point>& centroids) {
    double sum = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        sum += squared_distance(points[i], centroids[labels[i]]);
    }
    return sum;
}

std::vector<Point> kmeans_plus_plus(std::span<const Point> points, std::size_t k, Rng& rng) {
    const std::size_t n = points.size();
    std::vector<Point> centroids;
    centroids.reserve(k);
    centroids.push_back(points[uniform_index(rng, n)]);
    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) {
        d2[i] = squared_distance(points[i], centroids.back());
    }
    while (centroids.size() < k) {
        const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
        std::size_t pick = 0;
        if (total > 0.0) {
            const double u = uniform01(rng) * total;
            double cumulative = 0.0;
            pick = n;
            for (std::size_t i = 0; i < n; ++i) {
                cumulative += d2[i];
                if (d2[i] > 0.0 && cumulative > u) {
                    pick = i;
                    break;
                }
            }
            if (pick == n) {
                // Rounding left u at the very end of the cumulative sum.
                pick = static_cast<std::size_t>(std::distance(d2.begin(), std::max_element(d2.begin(), d2.end())));
            }
        } else {
            pick = uniform_index(rng, n);
        }
        centroids.push_back(points[pick]);
        for (std::size_t i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], squared_distance(points[i], centroids.back()));
        }
    }
    return centroids;
}

struct LloydResult {
    Labels labels;
    std::vector<Point> centroids;
    double inertia = 0.0;
    std::vector<double> history;
};

LloydResult lloyd(std::span<const Point> points, std::vector<Point> centroids, const KMeansConfig& cfg) {
    const std::size_t n = points.size();
    const std::size_t k = centroids.size();
    const std::size_t dim = points.front().size();
    LloydResult out;
    Labels labels(n, 0);
    std::vector<double> dist(n, 0.0);

    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        std::vector<std::size_t> sizes(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            labels[i] = nearest(points[i], centroids, &dist[i]);
            ++sizes[labels[i]];
        }
        // Re-seed each empty cluster with the point farthest from its centroid,
        // taken from a cluster that can spare it.
        for (std::size_t c = 0; c < k; ++c) {
            if (sizes[c] != 0) {
                continue;
            }
            std::size_t far = n;
            for (std::size_t i = 0; i < n; ++i) {
                if (sizes[labels[i]] > 1 && (far == n || dist[i] > dist[far])) {
                    far = i;
                }
            }
            --sizes[labels[far]];
            labels[far] = c;
            dist[far] = 0.0;
            ++sizes[c];
        }

        std::vector<Point> updated(k, Point(dim, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            auto& target = updated[labels[i]];
            for (std::size_t d = 0; d < dim; ++d) {
                target[d] += points[i][d];
            }
        }
        double shift = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            for (double& x : updated[c]) {
                x /= static_cast<double>(sizes[c]);
            }
            shift = std::max(shift, std::sqrt(squared_distance(updated[c], centroids[c])));
        }
        centroids = std::move(updated);
        out.history.push_back(total_inertia(points, labels, centroids));
        if (shift < cfg.epsilon) {
            break;
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        labels[i] = nearest(points[i], centroids);
    }
    out.inertia = total_inertia(points, labels, centroids);
    out.history.push_back(out.inertia);
    out.labels = std::move(labels);
    out.centroids = std::move(centroids);
    return out;
}

void validate_points(std::span<const Point> points, std::size_t k, const char* what) {
    if (points.empty()) {
        throw std::invalid_argument(std::string(what) + ": no points");
    }
    if (k == 0) {
        throw std::invalid_argument(std::string(what) + ": k must be positive");
    }
    if (k > points.size()) {
        throw std::invalid_argument(std::string(what) + ": k = " + std::to_string(k) + " exceeds " +
                                    std::to_string(points.size()) + " points");
    }
    const std::size_t dim = points.front().size();
    if (dim == 0) {
        throw std::invalid_argument(std::string(what) + ": points have no coordinates");
    }
    for (const auto& p : points) {
        if (p.size() != dim) {
            throw std::invalid_argument(std::string(what) + ": points differ in dimension");
        }
    }
}

} // namespace

std::string_view to_string(Algorithm algo) {
    switch (algo) {
    case Algorithm::kmeans: return "kmeans";
    case Algorithm::spectral: return "spectral";
    case Algorithm::scalar_ordered: return "scalar_ordered";
    }
    return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
    if (name == "kmeans") {
        return Algorithm::kmeans;
    }
    if (name == "spectral") {
        return Algorithm::spectral;
    }
    throw std::invalid_argument("unknown algorithm '" + std::string(name) + "' (expected kmeans|spectral)");
}

std::string_view to_string(LaplacianKind kind) {
    return kind == LaplacianKind::unnormalized ? "unnormalized" : "symmetric_normalized";
}

LaplacianKind parse_laplacian_kind(std::string_view name) {
    if (name == "unnormalized") {
        return LaplacianKind::unnormalized;
    }
    if (name == "symmetric_normalized") {
        return LaplacianKind::symmetric_normalized;
    }
    throw std::invalid_argument("unknown Laplacian '" + std::string(name) +
                                "' (expected unnormalized|symmetric_normalized)");
}

std::vector<std::size_t> ClusterAssignment::cluster_sizes() const {
    std::vector<std::size_t> sizes(k, 0);
    for (auto label : labels) {
        ++sizes.at(label);
    }
    return sizes;
}

ClusterAssignment kmeans(std::span<const Point> points, const KMeansConfig& cfg, KMeansTrace* trace) {
    validate_points(points, cfg.k, "kmeans");
    if (cfg.restarts < 1 || cfg.max_iters < 1 || !(cfg.epsilon > 0.0)) {
        throw std::invalid_argument("kmeans: restarts, max_iters and epsilon must be positive");
    }
    if (trace != nullptr) {
        trace->inertia_history.clear();
    }

    LloydResult best;
    std::size_t best_restart = 0;
    for (int r = 0; r < cfg.restarts; ++r) {
        auto rng = make_stream(cfg.seed, {static_cast<std::uint64_t>(r)});
        auto result = lloyd(points, kmeans_plus_plus(points, cfg.k, rng), cfg);
        if (trace != nullptr) {
            trace->inertia_history.push_back(result.history);
        }
        if (r == 0 || result.inertia < best.inertia) {
            best = std::move(result);
            best_restart = static_cast<std::size_t>(r);
        }
    }
    if (trace != nullptr) {
        trace->best_restart = best_restart;
    }

    ClusterAssignment out;
    out.labels = std::move(best.labels);
    out.k = cfg.k;
    out.centroids = std::move(best.centroids);
    out.algorithm = Algorithm::kmeans;
    out.inertia = best.inertia;
    return out;
}

std::vector<Point> rows_as_points(const Matrix& m) {
    std::vector<Point> points;
    points.reserve(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto row = m.row(r);
        points.emplace_back(row.begin(), row.end());
    }
    return points;
}

double median_pairwise_distance(std::span<const Point> points) {
    std::vector<double> distances;
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            const double d = std::sqrt(squared_distance(points[i], points[j]));
            if (d > 0.0) {
                distances.push_back(d);
            }
        }
    }
    if (distances.empty()) {
        return 1.0;
    }
    std::sort(distances.begin(), distances.end());
    const std::size_t mid = distances.size() / 2;
    return distances.size() % 2 == 1 ? distances[mid] : 0.5 * (distances[mid - 1] + distances[mid]);
}

SymmetricMatrix rbf_affinity(std::span<const Point> points, Bandwidth sigma) {
    if (points.size() < 2) {
        throw std::invalid_argument("rbf_affinity: needs at least 2 points");
    }
    validate_points(points, 1, "rbf_affinity");
    const double s = sigma.use_median ? median_pairwise_distance(points) : sigma.value;
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw std::invalid_argument("rbf_affinity: bandwidth must be positive");
    }
    const std::size_t n = points.size();
    Matrix w(n, n);
    const double denom = 2.0 * s * s;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double value = std::exp(-squared_distance(points[i], points[j]) / denom);
            w(i, j) = value;
            w(j, i) = value;
        }
    }
    return SymmetricMatrix(std::move(w));
}

SymmetricMatrix laplacian(const SymmetricMatrix& w, LaplacianKind kind) {
    const std::size_t n = w.order();
    std::vector<double> degree(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (w(i, i) != 0.0) {
            throw std::invalid_argument("laplacian: affinity diagonal must be zero");
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (w(i, j) < 0.0) {
                throw std::invalid_argument("laplacian: negative affinity at (" + std::to_string(i) + "," +
                                            std::to_string(j) + ")");
            }
            degree[i] += w(i, j);
        }
    }

    Matrix l(n, n);
    if (kind == LaplacianKind::unnormalized) {
        for (std::size_t i = 0; i < n; ++i) {
            l(i, i) = degree[i];
            for (std::size_t j = i + 1; j < n; ++j) {
                l(i, j) = -w(i, j);
                l(j, i) = -w(i, j);
            }
        }
    } else {
        std::vector<double> inv_sqrt(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            inv_sqrt[i] = degree[i] > 0.0 ? 1.0 / std::sqrt(degree[i]) : 0.0;
            l(i, i) = degree[i] > 0.0 ? 1.0 : 0.0;
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double value = -w(i, j) * inv_sqrt[i] * inv_sqrt[j];
                l(i, j) = value;
                l(j, i) = value;
            }
        }
    }
    return SymmetricMatrix(std::move(l));
}

std::size_t eigengap_suggest_k(std::span<const double> eigenvalues, std::size_t k_max) {
    if (eigenvalues.size() < 2) {
        throw std::invalid_argument("eigengap_suggest_k: needs at least 2 eigenvalues");
    }
    if (k_max == 0) {
        throw std::invalid_argument("eigengap_suggest_k: k_max must be positive");
    }
    const std::size_t last = std::min(k_max, eigenvalues.size() - 1);
    std::size_t best = 1;
    double best_gap = eigenvalues[1] - eigenvalues[0];
    for (std::size_t g = 2; g <= last; ++g) {
        const double gap = eigenvalues[g] - eigenvalues[g - 1];
        if (gap > best_gap) {
            best_gap = gap;
            best = g;
        }
    }
    return best;
}

SpectralResult spectral_cluster(std::span<const Point> points, const SpectralConfig& cfg) {
    validate_points(points, cfg.k, "spectral_cluster");
    const std::size_t n = points.size();
    SpectralResult out;
    out.assignment.k = cfg.k;
    out.assignment.algorithm = Algorithm::spectral;
    if (n == 1) {
        out.assignment.labels = {0};
        out.assignment.centroids = {Point{1.0}};
        out.eigenvalues = {0.0};
        out.sigma = cfg.sigma.use_median ? 1.0 : cfg.sigma.value;
        return out;
    }

    out.sigma = cfg.sigma.use_median ? median_pairwise_distance(points) : cfg.sigma.value;
    const auto w = rbf_affinity(points, Bandwidth::fixed(out.sigma));
    const auto eig = jacobi_eigh(laplacian(w, cfg.laplacian));
    out.eigenvalues = eig.eigenvalues;
    out.suggested_k = eigengap_suggest_k(out.eigenvalues, std::min<std::size_t>(n - 1, 10));

    std::vector<Point> embedding(n, Point(cfg.k, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < cfg.k; ++j) {
            embedding[i][j] = eig.eigenvectors(i, j);
        }
    }
    KMeansConfig km = cfg.kmeans;
    km.k = cfg.k;
    auto assignment = kmeans(embedding, km);
    assignment.algorithm = Algorithm::spectral;
    out.assignment = std::move(assignment);
    return out;
}

ClusterAssignment cluster_scalar_feature(std::span<const double> values, std::size_t k, const KMeansConfig& cfg) {
    std::vector<Point> points;
    points.reserve(values.size());
    for (double v : values) {
        points.push_back(Point{v});
    }
    KMeansConfig km = cfg;
    km.k = k;
    auto raw = kmeans(points, km);

    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&raw](std::size_t a, std::size_t b) { return raw.centroids[a][0] < raw.centroids[b][0]; });

    ClusterAssignment out;
    out.k = k;
    out.algorithm = Algorithm::scalar_ordered;
    for (auto idx : order) {
        out.centroids.push_back(raw.centroids[idx]);
    }
    // Re-labelling against the sorted centroids with lowest-index tie-breaks
    // keeps labels monotone in the values even for duplicate centroids.
    out.labels.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        out.labels[i] = nearest(points[i], out.centroids);
    }
    out.inertia = total_inertia(points, out.labels, out.centroids);
    return out;
}

} // namespace epiclust
