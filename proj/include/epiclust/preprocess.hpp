#pragma once

#include "epiclust/ingest.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace epiclust {

enum class PreprocessKind { none, population, zscore, minmax_row, minmax_global };

std::string_view to_string(PreprocessKind kind);
/// Accepts `none|population|zscore|minmax_row|minmax_global`.
PreprocessKind parse_preprocess_kind(std::string_view name);

/// Cases per million persons.
EpicurveMatrix population_normalize(const EpicurveMatrix& m);

/// Row-wise standardisation with the population (divide-by-N) standard
/// deviation. Constant rows become all zeros.
EpicurveMatrix zscore_rows(const EpicurveMatrix& m);

/// Each row divided by its own maximum. All-zero rows are left alone.
EpicurveMatrix minmax_rows(const EpicurveMatrix& m);

/// Whole matrix divided by its global maximum.
EpicurveMatrix minmax_global(const EpicurveMatrix& m);

EpicurveMatrix apply_preprocess(const EpicurveMatrix& m, PreprocessKind kind);

} // namespace epiclust
