#include "epiclust/synth.hpp"

#include "epiclust/error.hpp"
#include "epiclust/random.hpp"
#include "epiclust/report.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <numeric>

namespace epiclust {

namespace {

enum Stream : std::uint64_t { membership = 1, curves = 2, features = 3 };

struct CorrelatedFeature {
    const char* name;
    double base;
    double slope;
    double noise;
};

// Affine in the planted cluster id; noise is a tenth of the slope or less.
constexpr CorrelatedFeature correlated[] = {
    {"Population", 300000.0, 600000.0, 50000.0},
    {"Population density", 200.0, 800.0, 60.0},
    {"Total monthly expenditure", 45000.0, 20000.0, 1500.0},
    {"Median years in education", 8.0, 2.0, 0.15},
};

struct NoiseFeature {
    const char* name;
    double low;
    double high;
};

constexpr NoiseFeature noise[] = {
    {"Food expenditure share", 30.0, 50.0},   {"Poverty rate", 1.0, 12.0},
    {"Persons using internet", 20.0, 60.0},   {"Skilled labour", 10.0, 35.0},
    {"Unskilled labour", 15.0, 40.0},         {"Agriculture", 5.0, 45.0},
    {"Unemployment rate", 2.0, 8.0},
};

} // namespace

double planted_level(std::size_t cluster) {
    return 20.0 + 60.0 * static_cast<double>(cluster);
}

namespace {

// `per_unit` steps per unit, e.g. 100 for two decimals.
double round_to(double v, double per_unit) {
    return std::round(v * per_unit) / per_unit;
}

std::string region_name(std::size_t i, std::size_t n) {
    const int width = n >= 100 ? 3 : 2;
    char buf[32];
    std::snprintf(buf, sizeof buf, "Region%0*zu", width, i + 1);
    return buf;
}

} // namespace

SynthFixture generate_fixture(const SynthConfig& cfg) {
    if (cfg.k_true == 0 || cfg.n_regions < cfg.k_true) {
        throw InputError("synth: need 1 <= k_true <= n_regions");
    }
    if (cfg.n_days == 0) {
        throw InputError("synth: need at least one day");
    }
    const std::size_t n = cfg.n_regions;

    // Balanced planted membership in shuffled region order.
    Labels truth(n);
    {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        auto rng = make_stream(cfg.seed, {membership});
        for (std::size_t i = n; i > 1; --i) {
            std::swap(order[i - 1], order[uniform_index(rng, i)]);
        }
        for (std::size_t pos = 0; pos < n; ++pos) {
            truth[order[pos]] = pos % cfg.k_true;
        }
    }

    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) {
        names.push_back(region_name(i, n));
    }
    std::vector<Date> dates;
    for (std::size_t d = 0; d < cfg.n_days; ++d) {
        dates.push_back(add_days(cfg.start_date, static_cast<long>(d)));
    }

    // Planted level on a shared wave; multiplicative noise, so a row's shape
    // carries no information about its cluster once mean and scale are removed.
    Matrix values(n, cfg.n_days);
    {
        auto rng = make_stream(cfg.seed, {curves});
        const double phase = 2.0 * std::numbers::pi * uniform01(rng);
        for (std::size_t i = 0; i < n; ++i) {
            const double level = planted_level(truth[i]);
            const double region_scale = std::exp(0.05 * standard_normal(rng));
            for (std::size_t d = 0; d < cfg.n_days; ++d) {
                const double wave =
                    1.0 + 0.5 * std::sin(2.0 * std::numbers::pi * static_cast<double>(d) / 60.0 + phase);
                const double jitter = std::exp(0.1 * standard_normal(rng) - 0.005);
                values(i, d) = std::max(0.0, std::round(level * region_scale * wave * jitter));
            }
        }
    }

    std::vector<std::string> feature_names;
    std::vector<std::string> correlated_names;
    std::vector<std::string> noise_names;
    for (const auto& c : correlated) {
        feature_names.emplace_back(c.name);
        correlated_names.emplace_back(c.name);
    }
    for (const auto& z : noise) {
        feature_names.emplace_back(z.name);
        noise_names.emplace_back(z.name);
    }

    Matrix feature_values(n, feature_names.size());
    std::vector<std::int64_t> populations(n);
    {
        auto rng = make_stream(cfg.seed, {features});
        for (std::size_t i = 0; i < n; ++i) {
            const double c = static_cast<double>(truth[i]);
            for (std::size_t j = 0; j < std::size(correlated); ++j) {
                const auto& spec = correlated[j];
                feature_values(i, j) = spec.base + spec.slope * c + spec.noise * standard_normal(rng);
            }
            feature_values(i, 0) = std::max(1000.0, std::round(feature_values(i, 0)));
            feature_values(i, 1) = round_to(feature_values(i, 1), 10.0);
            feature_values(i, 2) = std::round(feature_values(i, 2));
            feature_values(i, 3) = round_to(feature_values(i, 3), 100.0);
            for (std::size_t j = 0; j < std::size(noise); ++j) {
                const auto& spec = noise[j];
                feature_values(i, std::size(correlated) + j) =
                    round_to(spec.low + (spec.high - spec.low) * uniform01(rng), 100.0);
            }
            populations[i] = static_cast<std::int64_t>(feature_values(i, 0));
        }
    }

    EpicurveMatrix epicurves(names, std::move(dates), std::move(values), std::move(populations));
    FeatureTable table(std::move(names), std::move(feature_names), std::move(feature_values));
    return SynthFixture{std::move(epicurves), std::move(table), std::move(truth), std::move(correlated_names),
                        std::move(noise_names)};
}

void write_fixture(const SynthFixture& fixture, const SynthConfig& cfg, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    auto open = [&out_dir](const char* name) {
        std::ofstream out(out_dir / name, std::ios::binary);
        if (!out) {
            throw InputError("cannot write " + (out_dir / name).string());
        }
        return out;
    };
    {
        auto out = open("epicurves.csv");
        write_epicurves_csv(out, fixture.epicurves);
    }
    {
        auto out = open("populations.csv");
        write_populations_csv(out, fixture.epicurves);
    }
    {
        auto out = open("features.csv");
        write_features_csv(out, fixture.features);
    }
    nlohmann::ordered_json truth;
    truth["schema_version"] = schema_version;
    truth["seed"] = cfg.seed;
    truth["n_regions"] = cfg.n_regions;
    truth["n_days"] = cfg.n_days;
    truth["k_true"] = cfg.k_true;
    truth["start_date"] = format_iso_date(cfg.start_date);
    truth["regions"] = fixture.epicurves.region_names();
    truth["labels"] = fixture.truth;
    auto levels = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < cfg.k_true; ++c) {
        levels.push_back(planted_level(c));
    }
    truth["cluster_levels"] = std::move(levels);
    truth["correlated_features"] = fixture.correlated_features;
    truth["noise_features"] = fixture.noise_features;
    auto out = open("truth.json");
    out << truth.dump(2) << '\n';
}

} // namespace epiclust
