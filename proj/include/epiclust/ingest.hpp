#pragma once

#include "epiclust/date.hpp"
#include "epiclust/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace epiclust {

/// Daily case counts, one row per region and one column per calendar day.
///
/// Construction validates the shape, the date axis (strictly consecutive days),
/// non-negativity and name uniqueness. Instances are immutable afterwards.
class EpicurveMatrix {
public:
    EpicurveMatrix(std::vector<std::string> region_names, std::vector<Date> dates, Matrix values,
                   std::optional<std::vector<std::int64_t>> populations = std::nullopt);

    /// False for raw counts; true once a transform may have produced negatives.
    bool signed_values() const noexcept { return signed_values_; }

    const std::vector<std::string>& region_names() const noexcept { return region_names_; }
    const std::vector<Date>& dates() const noexcept { return dates_; }
    const Matrix& values() const noexcept { return values_; }
    const std::optional<std::vector<std::int64_t>>& populations() const noexcept { return populations_; }

    std::size_t region_count() const noexcept { return region_names_.size(); }
    std::size_t day_count() const noexcept { return dates_.size(); }

    /// Same regions, dates and populations with replaced values.
    EpicurveMatrix with_values(Matrix values) const;

    /// Like with_values() but for preprocessed data that may be negative
    /// (z-scores). Only shape and finiteness are checked.
    static EpicurveMatrix transformed(const EpicurveMatrix& like, Matrix values);

    /// Days [first, first + count) as a new matrix.
    EpicurveMatrix slice_days(std::size_t first, std::size_t count) const;

    EpicurveMatrix with_populations(std::vector<std::int64_t> populations) const;

    friend bool operator==(const EpicurveMatrix&, const EpicurveMatrix&) = default;

private:
    EpicurveMatrix(std::vector<std::string> region_names, std::vector<Date> dates, Matrix values,
                   std::optional<std::vector<std::int64_t>> populations, bool signed_values);

    std::vector<std::string> region_names_;
    std::vector<Date> dates_;
    Matrix values_;
    std::optional<std::vector<std::int64_t>> populations_;
    bool signed_values_ = false;
};

/// Scalar per-region covariates, rows ordered like the paired EpicurveMatrix.
class FeatureTable {
public:
    FeatureTable(std::vector<std::string> region_names, std::vector<std::string> feature_names, Matrix values);

    const std::vector<std::string>& region_names() const noexcept { return region_names_; }
    const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
    const Matrix& values() const noexcept { return values_; }

    std::vector<double> column(std::size_t feature) const;

    friend bool operator==(const FeatureTable&, const FeatureTable&) = default;

private:
    std::vector<std::string> region_names_;
    std::vector<std::string> feature_names_;
    Matrix values_;
};

struct Window {
    std::size_t index = 0;
    Date start_date;
    Date end_date;
    EpicurveMatrix data;
};

struct WindowSplit {
    std::vector<Window> windows;
    std::size_t dropped_days = 0;
};

EpicurveMatrix load_epicurves(const std::filesystem::path& path,
                              const std::optional<std::filesystem::path>& population_path = std::nullopt);

std::vector<std::int64_t> load_populations(const std::filesystem::path& path,
                                           const std::vector<std::string>& region_names);

/// Rows are reordered to match `epicurves.region_names()`; the join is an exact,
/// case-sensitive name match.
FeatureTable load_features(const std::filesystem::path& path, const EpicurveMatrix& epicurves);

/// Cuts the date axis into consecutive, equal-length windows. Trailing days that
/// do not fill a whole window are dropped and counted in `dropped_days`.
WindowSplit split_windows(const EpicurveMatrix& m, std::size_t window_len = 30);

void write_epicurves_csv(std::ostream& out, const EpicurveMatrix& m);
void write_populations_csv(std::ostream& out, const EpicurveMatrix& m);
void write_features_csv(std::ostream& out, const FeatureTable& f);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_number(double v);

} // namespace epiclust
