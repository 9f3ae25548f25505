#pragma once

#include "epiclust/cluster.hpp"
#include "epiclust/ingest.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace epiclust {

struct SynthConfig {
    std::size_t n_regions = 25;
    std::size_t n_days = 120;
    std::size_t k_true = 3;
    std::uint64_t seed = 0;
    Date start_date{std::chrono::year{2020}, std::chrono::month{11}, std::chrono::day{15}};
};

/// Mean daily cases of planted cluster c: 20 + 60c.
double planted_level(std::size_t cluster);

/// Planted-partition dataset. Every region follows a shared wave shape scaled
/// to its cluster's level, so cluster identity is carried by epicurve means.
struct SynthFixture {
    EpicurveMatrix epicurves;
    FeatureTable features;
    /// Planted cluster per region; 0 is the lowest level.
    Labels truth;
    std::vector<std::string> correlated_features;
    std::vector<std::string> noise_features;
};

SynthFixture generate_fixture(const SynthConfig& cfg);

/// Writes epicurves.csv, populations.csv, features.csv and truth.json.
void write_fixture(const SynthFixture& fixture, const SynthConfig& cfg, const std::filesystem::path& out_dir);

} // namespace epiclust
