#pragma once

#include "epiclust/pipeline.hpp"
#include "epiclust/synth.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace epiclust {

struct RunConfig {
    std::filesystem::path input;
    std::optional<std::filesystem::path> features;
    std::optional<std::filesystem::path> populations;
    std::filesystem::path out = ".";
    std::vector<PreprocessKind> preps{PreprocessKind::none, PreprocessKind::zscore, PreprocessKind::minmax_row,
                                      PreprocessKind::minmax_global};
    std::vector<Algorithm> algos{Algorithm::spectral, Algorithm::kmeans};
    PipelineConfig pipeline;
    bool heatmap = false;
};

/// Overlays the keys of a JSON config file onto `cfg`. Keys mirror the
/// RunConfig/PipelineConfig field names; `kmeans` and `spectral` are nested
/// objects. Unknown keys are rejected.
void apply_config_file(const std::filesystem::path& path, RunConfig& cfg);

/// Writes `stability_<prep>_<algo>.csv` per technique and `summary.json`.
int cmd_stability(const RunConfig& cfg);

/// Writes `association.csv` and `association.json`. With more than one
/// candidate technique the stability study picks the one to use.
int cmd_associate(const RunConfig& cfg);

/// Writes `labels.csv` and `labels.json` for the first prep/algo pair.
int cmd_cluster(const RunConfig& cfg);

int cmd_synth(const SynthConfig& cfg, const std::filesystem::path& out_dir);

/// Full command line entry point. Exit status 0 on success, 2 for unusable
/// input, 1 for any other failure.
int run_cli(int argc, const char* const* argv);

} // namespace epiclust
