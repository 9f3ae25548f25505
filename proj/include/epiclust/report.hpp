#pragma once

#include "epiclust/pipeline.hpp"

#include <ostream>
#include <span>
#include <string>

namespace epiclust {

inline constexpr const char* schema_version = "1";

/// Window x window cost matrix: header `window,w0,w1,...`, one row per window.
void write_stability_csv(std::ostream& out, const StabilityMatrix& s);

/// Selected technique plus per-technique costs, balance and labels.
std::string stability_summary_json(std::span<const StabilityMatrix> results, const TechniqueSelection& selection,
                                   const EpicurveMatrix& m, const PipelineConfig& cfg);

/// Header `feature,window,sm1,sm2_mean,sm2_std,deviation`, feature-major rows.
void write_association_csv(std::ostream& out, const AssociationReport& r);

std::string association_json(const AssociationReport& r, const EpicurveMatrix& m);

/// `region,window,label` rows for every window.
void write_labels_csv(std::ostream& out, const EpicurveMatrix& m, const WindowClustering& wc);

std::string labels_json(const EpicurveMatrix& m, const WindowClustering& wc, const Technique& technique,
                        const PipelineConfig& cfg);

/// Self-contained SVG heatmap of a square matrix with `labels` on both axes.
std::string heatmap_svg(const Matrix& values, std::span<const std::string> labels, const std::string& title);

} // namespace epiclust
