#pragma once

#include "epiclust/cluster.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace epiclust {

/// Label-difference cost between two aligned labelings.
enum class Metric {
    /// Mean squared difference of label ordinals.
    squared,
    /// Fraction of regions whose labels differ.
    mismatch,
};

std::string_view to_string(Metric metric);
Metric parse_metric(std::string_view name);

/// Largest k for which all k! label bijections are enumerated.
inline constexpr std::size_t max_enumerated_k = 8;

struct AlignmentResult {
    double cost = 0.0;
    /// permutation[label of a] = label of b it is mapped onto.
    std::vector<std::size_t> permutation;
};

/// Minimum cost over all relabelings p of `a` of cost(p(a), b). Ties keep the
/// lexicographically smallest permutation.
AlignmentResult best_permutation_dissimilarity(std::span<const std::size_t> a, std::span<const std::size_t> b,
                                               std::size_t k, Metric metric = Metric::squared);

/// Cost of `a` remapped through `permutation` against `b`, no minimisation.
double remapped_cost(std::span<const std::size_t> a, std::span<const std::size_t> b,
                     std::span<const std::size_t> permutation, Metric metric = Metric::squared);

enum class BaselineMode {
    /// Each label drawn independently and uniformly from [0, k).
    uniform,
    /// Random shuffle of `b`, so cluster sizes are preserved.
    shuffle,
};

std::string_view to_string(BaselineMode mode);
BaselineMode parse_baseline_mode(std::string_view name);

struct BaselineOptions {
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    Metric metric = Metric::squared;
    BaselineMode mode = BaselineMode::uniform;
};

struct BaselineResult {
    double sm1 = 0.0;
    double sm2_mean = 0.0;
    /// Population standard deviation over trials.
    double sm2_std = 0.0;
    std::size_t trials = 0;
    double deviation = 0.0;
};

/// Monte Carlo null: mean and spread of the alignment cost between random
/// labelings and `b`. Trial t draws from stream (seed, t). `sm1` is left at 0
/// for the caller to fill in; see with_sm1().
BaselineResult random_baseline(std::span<const std::size_t> b, std::size_t k, const BaselineOptions& options);

/// Sets sm1 and recomputes deviation = sm2_mean - sm1.
BaselineResult with_sm1(BaselineResult baseline, double sm1);

struct BalanceDiagnostic {
    bool degenerate = false;
    double largest_fraction = 0.0;
    std::size_t largest_label = 0;
};

/// Degenerate iff the largest cluster holds at least `max_fraction` of the regions.
BalanceDiagnostic balance_check(const ClusterAssignment& a, double max_fraction = 0.8);
BalanceDiagnostic balance_check(std::span<const std::size_t> labels, std::size_t k, double max_fraction = 0.8);

} // namespace epiclust
