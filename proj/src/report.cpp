#include "epiclust/report.hpp"

#include "csv.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdio>

namespace epiclust {

namespace {

using nlohmann::ordered_json;

ordered_json technique_json(const Technique& t) {
    return ordered_json{{"prep", to_string(t.prep)}, {"algo", to_string(t.algo)}, {"name", technique_name(t)}};
}

ordered_json balance_json(const BalanceDiagnostic& b) {
    return ordered_json{{"degenerate", b.degenerate},
                        {"largest_fraction", b.largest_fraction},
                        {"largest_label", b.largest_label}};
}

ordered_json matrix_json(const Matrix& m) {
    auto rows = ordered_json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto row = m.row(r);
        rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    return rows;
}

ordered_json config_json(const PipelineConfig& cfg) {
    ordered_json sigma = cfg.sigma.use_median ? ordered_json("median") : ordered_json(cfg.sigma.value);
    return ordered_json{{"window_len", cfg.window_len},
                        {"k", cfg.k},
                        {"prep_scope", to_string(cfg.prep_scope)},
                        {"balance_threshold", cfg.balance_threshold},
                        {"metric", to_string(cfg.metric)},
                        {"trials", cfg.trials},
                        {"seed", cfg.seed},
                        {"baseline", to_string(cfg.baseline)},
                        {"kmeans",
                         {{"epsilon", cfg.kmeans.epsilon},
                          {"max_iters", cfg.kmeans.max_iters},
                          {"restarts", cfg.kmeans.restarts},
                          {"seed", cfg.kmeans.seed}}},
                        {"spectral", {{"sigma", sigma}, {"laplacian", to_string(cfg.laplacian)}}}};
}

std::string dump(const ordered_json& j) {
    return j.dump(2) + "\n";
}

// Dark blue (low) to yellow-green (high).
std::string heat_colour(double t) {
    t = std::clamp(t, 0.0, 1.0);
    const int r = static_cast<int>(0x0B + t * (0xC2 - 0x0B) + 0.5);
    const int g = static_cast<int>(0x1F + t * (0xE6 - 0x1F) + 0.5);
    const int b = static_cast<int>(0x5C + t * (0x6A - 0x5C) + 0.5);
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02X%02X%02X", r, g, b);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

} // namespace

void write_stability_csv(std::ostream& out, const StabilityMatrix& s) {
    out << "window";
    for (std::size_t j = 0; j < s.window_count; ++j) {
        out << ",w" << j;
    }
    out << '\n';
    for (std::size_t i = 0; i < s.window_count; ++i) {
        out << 'w' << i;
        for (std::size_t j = 0; j < s.window_count; ++j) {
            out << ',' << format_number(s.costs(i, j));
        }
        out << '\n';
    }
}

std::string stability_summary_json(std::span<const StabilityMatrix> results, const TechniqueSelection& selection,
                                   const EpicurveMatrix& m, const PipelineConfig& cfg) {
    ordered_json root;
    root["schema_version"] = schema_version;
    root["config"] = config_json(cfg);
    root["regions"] = m.region_names();
    root["dropped_days"] = results.empty() ? 0 : results.front().dropped_days;
    root["selected"] = technique_json(selection.technique);
    root["selected"]["all_degenerate"] = selection.all_degenerate;
    auto techniques = ordered_json::array();
    for (const auto& s : results) {
        ordered_json t = technique_json(s.technique);
        t["mean_off_diagonal_cost"] = s.mean_off_diagonal();
        t["any_degenerate"] = s.any_degenerate();
        t["costs"] = matrix_json(s.costs);
        auto windows = ordered_json::array();
        for (std::size_t w = 0; w < s.window_count; ++w) {
            ordered_json wj;
            wj["index"] = w;
            wj["balance"] = balance_json(s.balance[w]);
            wj["suggested_k"] = s.suggested_k[w] ? ordered_json(*s.suggested_k[w]) : ordered_json(nullptr);
            wj["labels"] = s.window_labels[w];
            windows.push_back(std::move(wj));
        }
        t["windows"] = std::move(windows);
        techniques.push_back(std::move(t));
    }
    root["techniques"] = std::move(techniques);
    return dump(root);
}

void write_association_csv(std::ostream& out, const AssociationReport& r) {
    out << "feature,window,sm1,sm2_mean,sm2_std,deviation\n";
    for (const auto& cell : r.cells) {
        out << csv::escape(r.features[cell.feature].name) << ',' << cell.window << ','
            << format_number(cell.baseline.sm1) << ',' << format_number(cell.baseline.sm2_mean) << ','
            << format_number(cell.baseline.sm2_std) << ',' << format_number(cell.baseline.deviation) << '\n';
    }
}

std::string association_json(const AssociationReport& r, const EpicurveMatrix& m) {
    ordered_json root;
    root["schema_version"] = schema_version;
    root["chosen_technique"] = technique_json(r.chosen);
    root["k"] = r.k;
    root["metric"] = to_string(r.metric);
    root["trials"] = r.trials;
    root["seed"] = r.seed;
    root["dropped_days"] = r.dropped_days;
    root["regions"] = m.region_names();

    auto windows = ordered_json::array();
    for (const auto& w : r.windows) {
        ordered_json wj;
        wj["index"] = w.index;
        wj["start_date"] = format_iso_date(w.start_date);
        wj["end_date"] = format_iso_date(w.end_date);
        wj["labels"] = w.epidemic.assignment.labels;
        wj["balance"] = balance_json(w.balance);
        wj["suggested_k"] = w.epidemic.suggested_k ? ordered_json(*w.epidemic.suggested_k) : ordered_json(nullptr);
        windows.push_back(std::move(wj));
    }
    root["windows"] = std::move(windows);

    auto features = ordered_json::array();
    for (const auto& f : r.features) {
        ordered_json fj;
        fj["name"] = f.name;
        fj["effective_k"] = f.effective_k;
        fj["labels"] = f.assignment.labels;
        auto centroids = ordered_json::array();
        for (const auto& c : f.assignment.centroids) {
            centroids.push_back(c.front());
        }
        fj["centroids"] = std::move(centroids);
        fj["balance"] = balance_json(f.balance);
        features.push_back(std::move(fj));
    }
    root["features"] = std::move(features);

    auto cells = ordered_json::array();
    for (const auto& c : r.cells) {
        ordered_json cj;
        cj["feature"] = r.features[c.feature].name;
        cj["window"] = c.window;
        cj["sm1"] = c.baseline.sm1;
        cj["sm1_mismatch"] = c.sm1_mismatch;
        cj["sm2_mean"] = c.baseline.sm2_mean;
        cj["sm2_std"] = c.baseline.sm2_std;
        cj["deviation"] = c.baseline.deviation;
        cj["trials"] = c.baseline.trials;
        cj["permutation"] = c.alignment.permutation;
        cells.push_back(std::move(cj));
    }
    root["cells"] = std::move(cells);
    return dump(root);
}

void write_labels_csv(std::ostream& out, const EpicurveMatrix& m, const WindowClustering& wc) {
    out << "region,window,label\n";
    for (std::size_t w = 0; w < wc.clusterings.size(); ++w) {
        const auto& labels = wc.clusterings[w].assignment.labels;
        for (std::size_t r = 0; r < labels.size(); ++r) {
            out << csv::escape(m.region_names()[r]) << ',' << w << ',' << labels[r] << '\n';
        }
    }
}

std::string labels_json(const EpicurveMatrix& m, const WindowClustering& wc, const Technique& technique,
                        const PipelineConfig& cfg) {
    ordered_json root;
    root["schema_version"] = schema_version;
    root["technique"] = technique_json(technique);
    root["config"] = config_json(cfg);
    root["regions"] = m.region_names();
    root["dropped_days"] = wc.split.dropped_days;
    auto windows = ordered_json::array();
    for (std::size_t w = 0; w < wc.clusterings.size(); ++w) {
        const auto& window = wc.split.windows[w];
        const auto& c = wc.clusterings[w];
        ordered_json wj;
        wj["index"] = window.index;
        wj["start_date"] = format_iso_date(window.start_date);
        wj["end_date"] = format_iso_date(window.end_date);
        wj["labels"] = c.assignment.labels;
        wj["cluster_sizes"] = c.assignment.cluster_sizes();
        wj["inertia"] = c.assignment.inertia;
        wj["suggested_k"] = c.suggested_k ? ordered_json(*c.suggested_k) : ordered_json(nullptr);
        wj["balance"] = balance_json(balance_check(c.assignment, cfg.balance_threshold));
        windows.push_back(std::move(wj));
    }
    root["windows"] = std::move(windows);
    return dump(root);
}

std::string heatmap_svg(const Matrix& values, std::span<const std::string> labels, const std::string& title) {
    constexpr int cell = 60;
    constexpr int margin = 70;
    const int n = static_cast<int>(values.rows());
    const int size = margin + n * cell + 10;
    const auto data = values.data();
    const double hi = data.empty() ? 0.0 : *std::max_element(data.begin(), data.end());

    std::string svg;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" font-family=\"sans-serif\" "
                  "font-size=\"12\">\n",
                  size, size + 20);
    svg += buf;
    svg += "<text x=\"10\" y=\"20\">" + xml_escape(title) + "</text>\n";
    for (int i = 0; i < n; ++i) {
        const std::string label = i < static_cast<int>(labels.size()) ? xml_escape(labels[i]) : std::to_string(i);
        std::snprintf(buf, sizeof buf, "<text x=\"%d\" y=\"%d\" text-anchor=\"middle\">", margin + i * cell + cell / 2,
                      margin - 8);
        svg += buf + label + "</text>\n";
        std::snprintf(buf, sizeof buf, "<text x=\"%d\" y=\"%d\" text-anchor=\"end\">", margin - 8,
                      margin + i * cell + cell / 2 + 4);
        svg += buf + label + "</text>\n";
        for (int j = 0; j < n; ++j) {
            const double v = values(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
            const double t = hi > 0.0 ? v / hi : 0.0;
            std::snprintf(buf, sizeof buf, "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"%s\"/>\n",
                          margin + j * cell, margin + i * cell, cell, cell, heat_colour(t).c_str());
            svg += buf;
            std::snprintf(buf, sizeof buf,
                          "<text x=\"%d\" y=\"%d\" text-anchor=\"middle\" fill=\"%s\">%.3f</text>\n",
                          margin + j * cell + cell / 2, margin + i * cell + cell / 2 + 4,
                          t > 0.6 ? "#000000" : "#FFFFFF", v);
            svg += buf;
        }
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace epiclust
