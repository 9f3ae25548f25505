#include "epiclust/align.hpp"

#include "epiclust/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace epiclust {

namespace {

void validate_labels(std::span<const std::size_t> labels, std::size_t k, const char* which) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] >= k) {
            throw std::invalid_argument(std::string("label ") + std::to_string(labels[i]) + " at position " +
                                        std::to_string(i) + " of " + which + " is outside [0, " +
                                        std::to_string(k) + ")");
        }
    }
}

// Entry (i, j): number of regions with a == i and b == j.
std::vector<std::size_t> contingency(std::span<const std::size_t> a, std::span<const std::size_t> b, std::size_t k) {
    std::vector<std::size_t> counts(k * k, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        ++counts[a[i] * k + b[i]];
    }
    return counts;
}

double pair_cost(std::size_t x, std::size_t y, Metric metric) {
    if (metric == Metric::mismatch) {
        return x == y ? 0.0 : 1.0;
    }
    const double d = static_cast<double>(x) - static_cast<double>(y);
    return d * d;
}

} // namespace

std::string_view to_string(Metric metric) {
    return metric == Metric::squared ? "squared" : "mismatch";
}

Metric parse_metric(std::string_view name) {
    if (name == "squared") {
        return Metric::squared;
    }
    if (name == "mismatch") {
        return Metric::mismatch;
    }
    throw std::invalid_argument("unknown metric '" + std::string(name) + "' (expected squared|mismatch)");
}

std::string_view to_string(BaselineMode mode) {
    return mode == BaselineMode::uniform ? "uniform" : "shuffle";
}

BaselineMode parse_baseline_mode(std::string_view name) {
    if (name == "uniform") {
        return BaselineMode::uniform;
    }
    if (name == "shuffle") {
        return BaselineMode::shuffle;
    }
    throw std::invalid_argument("unknown baseline mode '" + std::string(name) + "' (expected uniform|shuffle)");
}

double remapped_cost(std::span<const std::size_t> a, std::span<const std::size_t> b,
                     std::span<const std::size_t> permutation, Metric metric) {
    if (a.size() != b.size() || a.empty()) {
        throw std::invalid_argument("remapped_cost: labelings must be non-empty and of equal length");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sum += pair_cost(permutation[a[i]], b[i], metric);
    }
    return sum / static_cast<double>(a.size());
}

AlignmentResult best_permutation_dissimilarity(std::span<const std::size_t> a, std::span<const std::size_t> b,
                                               std::size_t k, Metric metric) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("best_permutation_dissimilarity: lengths " + std::to_string(a.size()) +
                                    " and " + std::to_string(b.size()) + " differ");
    }
    if (a.empty()) {
        throw std::invalid_argument("best_permutation_dissimilarity: empty labelings");
    }
    if (k == 0) {
        throw std::invalid_argument("best_permutation_dissimilarity: k must be positive");
    }
    if (k > max_enumerated_k) {
        throw std::invalid_argument("best_permutation_dissimilarity: k = " + std::to_string(k) +
                                    " exceeds the enumeration limit of " + std::to_string(max_enumerated_k) +
                                    "; use the mismatch metric with an assignment solver instead");
    }
    validate_labels(a, k, "a");
    validate_labels(b, k, "b");

    // Summing over the k x k contingency table makes each permutation O(k^2)
    // instead of O(n); the integer totals keep the comparison exact.
    const auto counts = contingency(a, b, k);
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::vector<std::size_t> best_perm = perm;
    double best_total = std::numeric_limits<double>::infinity();
    do {
        double total = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) {
                const auto c = counts[i * k + j];
                if (c != 0) {
                    total += static_cast<double>(c) * pair_cost(perm[i], j, metric);
                }
            }
        }
        if (total < best_total) {
            best_total = total;
            best_perm = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    return AlignmentResult{best_total / static_cast<double>(a.size()), std::move(best_perm)};
}

BaselineResult random_baseline(std::span<const std::size_t> b, std::size_t k, const BaselineOptions& options) {
    if (options.trials == 0) {
        throw std::invalid_argument("random_baseline: trials must be positive");
    }
    if (b.empty()) {
        throw std::invalid_argument("random_baseline: empty labeling");
    }
    validate_labels(b, k, "b");

    std::vector<double> costs(options.trials);
    std::vector<std::size_t> draw(b.size());
    for (std::size_t t = 0; t < options.trials; ++t) {
        auto rng = make_stream(options.seed, {static_cast<std::uint64_t>(t)});
        if (options.mode == BaselineMode::uniform) {
            for (auto& label : draw) {
                label = uniform_index(rng, k);
            }
        } else {
            std::copy(b.begin(), b.end(), draw.begin());
            // Fisher-Yates with the portable index sampler.
            for (std::size_t i = draw.size(); i > 1; --i) {
                std::swap(draw[i - 1], draw[uniform_index(rng, i)]);
            }
        }
        costs[t] = best_permutation_dissimilarity(draw, b, k, options.metric).cost;
    }

    BaselineResult out;
    out.trials = options.trials;
    const double n = static_cast<double>(options.trials);
    out.sm2_mean = std::accumulate(costs.begin(), costs.end(), 0.0) / n;
    double ss = 0.0;
    for (double c : costs) {
        ss += (c - out.sm2_mean) * (c - out.sm2_mean);
    }
    out.sm2_std = std::sqrt(ss / n);
    out.deviation = out.sm2_mean - out.sm1;
    return out;
}

BaselineResult with_sm1(BaselineResult baseline, double sm1) {
    baseline.sm1 = sm1;
    baseline.deviation = baseline.sm2_mean - sm1;
    return baseline;
}

BalanceDiagnostic balance_check(std::span<const std::size_t> labels, std::size_t k, double max_fraction) {
    if (labels.empty()) {
        throw std::invalid_argument("balance_check: empty assignment");
    }
    if (!(max_fraction > 0.0 && max_fraction <= 1.0)) {
        throw std::invalid_argument("balance_check: threshold must lie in (0, 1]");
    }
    validate_labels(labels, k, "labels");
    std::vector<std::size_t> sizes(k, 0);
    for (auto label : labels) {
        ++sizes[label];
    }
    const auto largest = std::max_element(sizes.begin(), sizes.end());
    BalanceDiagnostic out;
    out.largest_label = static_cast<std::size_t>(std::distance(sizes.begin(), largest));
    out.largest_fraction = static_cast<double>(*largest) / static_cast<double>(labels.size());
    out.degenerate = out.largest_fraction >= max_fraction;
    return out;
}

BalanceDiagnostic balance_check(const ClusterAssignment& a, double max_fraction) {
    return balance_check(a.labels, a.k, max_fraction);
}

} // namespace epiclust
