#include "epiclust/preprocess.hpp"

#include "epiclust/error.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace epiclust {

std::string_view to_string(PreprocessKind kind) {
    switch (kind) {
    case PreprocessKind::none: return "none";
    case PreprocessKind::population: return "population";
    case PreprocessKind::zscore: return "zscore";
    case PreprocessKind::minmax_row: return "minmax_row";
    case PreprocessKind::minmax_global: return "minmax_global";
    }
    return "unknown";
}

PreprocessKind parse_preprocess_kind(std::string_view name) {
    for (auto kind : {PreprocessKind::none, PreprocessKind::population, PreprocessKind::zscore,
                      PreprocessKind::minmax_row, PreprocessKind::minmax_global}) {
        if (to_string(kind) == name) {
            return kind;
        }
    }
    throw std::invalid_argument("unknown preprocessing technique '" + std::string(name) +
                                "' (expected none|population|zscore|minmax_row|minmax_global)");
}

EpicurveMatrix population_normalize(const EpicurveMatrix& m) {
    if (!m.populations()) {
        throw InputError("population normalization needs per-region populations");
    }
    const auto& pops = *m.populations();
    Matrix out = m.values();
    for (std::size_t r = 0; r < out.rows(); ++r) {
        if (pops[r] <= 0) {
            throw InputError("population normalization: non-positive population for region '" +
                             m.region_names()[r] + "'");
        }
        const double scale = 1e6 / static_cast<double>(pops[r]);
        for (double& v : out.row(r)) {
            v *= scale;
        }
    }
    return m.with_values(std::move(out));
}

EpicurveMatrix zscore_rows(const EpicurveMatrix& m) {
    Matrix out = m.values();
    const auto n = static_cast<double>(out.cols());
    for (std::size_t r = 0; r < out.rows(); ++r) {
        auto row = out.row(r);
        double mean = 0.0;
        for (double v : row) {
            mean += v;
        }
        mean /= n;
        double ss = 0.0;
        for (double v : row) {
            ss += (v - mean) * (v - mean);
        }
        const double sd = std::sqrt(ss / n);
        // Constant rows (including all-zero epicurves) carry no shape.
        if (sd == 0.0) {
            std::fill(row.begin(), row.end(), 0.0);
            continue;
        }
        for (double& v : row) {
            v = (v - mean) / sd;
        }
    }
    return EpicurveMatrix::transformed(m, std::move(out));
}

EpicurveMatrix minmax_rows(const EpicurveMatrix& m) {
    Matrix out = m.values();
    for (std::size_t r = 0; r < out.rows(); ++r) {
        auto row = out.row(r);
        const double mx = *std::max_element(row.begin(), row.end());
        if (mx <= 0.0) {
            continue;
        }
        for (double& v : row) {
            v /= mx;
        }
    }
    return m.with_values(std::move(out));
}

EpicurveMatrix minmax_global(const EpicurveMatrix& m) {
    const auto data = m.values().data();
    const double mx = data.empty() ? 0.0 : *std::max_element(data.begin(), data.end());
    if (!(mx > 0.0)) {
        throw InputError("global max scaling needs at least one positive value");
    }
    Matrix out = m.values();
    for (std::size_t r = 0; r < out.rows(); ++r) {
        for (double& v : out.row(r)) {
            v /= mx;
        }
    }
    return m.with_values(std::move(out));
}

EpicurveMatrix apply_preprocess(const EpicurveMatrix& m, PreprocessKind kind) {
    switch (kind) {
    case PreprocessKind::none: return m;
    case PreprocessKind::population: return population_normalize(m);
    case PreprocessKind::zscore: return zscore_rows(m);
    case PreprocessKind::minmax_row: return minmax_rows(m);
    case PreprocessKind::minmax_global: return minmax_global(m);
    }
    throw std::invalid_argument("apply_preprocess: unknown technique");
}

} // namespace epiclust
