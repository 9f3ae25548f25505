#include "epiclust/ingest.hpp"

#include "csv.hpp"
#include "epiclust/error.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <unordered_map>
#include <unordered_set>

namespace epiclust {

namespace {

void check_names(const std::vector<std::string>& names, const char* what) {
    std::unordered_set<std::string> seen;
    for (const auto& name : names) {
        if (name.empty()) {
            throw InputError(std::string(what) + ": empty region name");
        }
        if (!seen.insert(name).second) {
            throw InputError(std::string(what) + ": duplicate region '" + name + "'");
        }
    }
}

std::unordered_map<std::string, std::size_t> index_by_name(const std::vector<std::string>& names) {
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < names.size(); ++i) {
        index.emplace(names[i], i);
    }
    return index;
}

std::string trimmed(const std::string& s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) {
        return {};
    }
    return s.substr(first, s.find_last_not_of(" \t") - first + 1);
}

} // namespace

EpicurveMatrix::EpicurveMatrix(std::vector<std::string> region_names, std::vector<Date> dates, Matrix values,
                               std::optional<std::vector<std::int64_t>> populations)
    : EpicurveMatrix(std::move(region_names), std::move(dates), std::move(values), std::move(populations), false) {}

EpicurveMatrix::EpicurveMatrix(std::vector<std::string> region_names, std::vector<Date> dates, Matrix values,
                               std::optional<std::vector<std::int64_t>> populations, bool signed_values)
    : region_names_{std::move(region_names)}, dates_{std::move(dates)}, values_{std::move(values)},
      populations_{std::move(populations)}, signed_values_{signed_values} {
    if (values_.rows() != region_names_.size() || values_.cols() != dates_.size()) {
        throw InputError("EpicurveMatrix: shape " + std::to_string(values_.rows()) + "x" +
                         std::to_string(values_.cols()) + " does not match " + std::to_string(region_names_.size()) +
                         " regions x " + std::to_string(dates_.size()) + " dates");
    }
    check_names(region_names_, "EpicurveMatrix");
    for (std::size_t j = 1; j < dates_.size(); ++j) {
        if (days_between(dates_[j - 1], dates_[j]) != 1) {
            throw InputError("EpicurveMatrix: non-consecutive dates " + format_iso_date(dates_[j - 1]) + " and " +
                             format_iso_date(dates_[j]));
        }
    }
    for (std::size_t r = 0; r < values_.rows(); ++r) {
        for (std::size_t c = 0; c < values_.cols(); ++c) {
            const double v = values_(r, c);
            if (!std::isfinite(v) || (!signed_values_ && v < 0.0)) {
                throw InputError("EpicurveMatrix: invalid count " + format_number(v) + " for region '" +
                                 region_names_[r] + "' on " + format_iso_date(dates_[c]));
            }
        }
    }
    if (populations_) {
        if (populations_->size() != region_names_.size()) {
            throw InputError("EpicurveMatrix: population count does not match region count");
        }
        for (std::size_t r = 0; r < populations_->size(); ++r) {
            if ((*populations_)[r] < 0) {
                throw InputError("EpicurveMatrix: negative population for region '" + region_names_[r] + "'");
            }
        }
    }
}

EpicurveMatrix EpicurveMatrix::with_values(Matrix values) const {
    return EpicurveMatrix(region_names_, dates_, std::move(values), populations_, signed_values_);
}

EpicurveMatrix EpicurveMatrix::transformed(const EpicurveMatrix& like, Matrix values) {
    return EpicurveMatrix(like.region_names_, like.dates_, std::move(values), like.populations_, true);
}

EpicurveMatrix EpicurveMatrix::slice_days(std::size_t first, std::size_t count) const {
    if (first + count > dates_.size()) {
        throw std::out_of_range("EpicurveMatrix::slice_days: range exceeds date axis");
    }
    std::vector<Date> dates(dates_.begin() + static_cast<std::ptrdiff_t>(first),
                            dates_.begin() + static_cast<std::ptrdiff_t>(first + count));
    return EpicurveMatrix(region_names_, std::move(dates), values_.column_block(first, count), populations_,
                          signed_values_);
}

EpicurveMatrix EpicurveMatrix::with_populations(std::vector<std::int64_t> populations) const {
    return EpicurveMatrix(region_names_, dates_, values_, std::move(populations), signed_values_);
}

FeatureTable::FeatureTable(std::vector<std::string> region_names, std::vector<std::string> feature_names,
                           Matrix values)
    : region_names_{std::move(region_names)}, feature_names_{std::move(feature_names)}, values_{std::move(values)} {
    if (values_.rows() != region_names_.size() || values_.cols() != feature_names_.size()) {
        throw InputError("FeatureTable: shape does not match names");
    }
    check_names(region_names_, "FeatureTable");
    std::unordered_set<std::string> seen;
    for (const auto& name : feature_names_) {
        if (name.empty() || !seen.insert(name).second) {
            throw InputError("FeatureTable: empty or duplicate feature name '" + name + "'");
        }
    }
    for (double v : values_.data()) {
        if (!std::isfinite(v)) {
            throw InputError("FeatureTable: missing or non-finite value");
        }
    }
}

std::vector<double> FeatureTable::column(std::size_t feature) const {
    std::vector<double> out(values_.rows());
    for (std::size_t r = 0; r < values_.rows(); ++r) {
        out[r] = values_(r, feature);
    }
    return out;
}

EpicurveMatrix load_epicurves(const std::filesystem::path& path,
                              const std::optional<std::filesystem::path>& population_path) {
    const std::string where = path.string();
    const auto rows = csv::read_file(path);
    if (rows.empty()) {
        throw InputError(where + ": empty file");
    }
    const auto& header = rows.front();
    if (header.fields.size() < 2) {
        throw ParseError(where, header.line, 1, "header needs a region column and at least one date");
    }

    std::vector<Date> dates;
    for (std::size_t c = 1; c < header.fields.size(); ++c) {
        const auto date = parse_iso_date(trimmed(header.fields[c]));
        if (!date) {
            throw ParseError(where, header.line, c + 1, "not an ISO date: '" + header.fields[c] + "'");
        }
        if (!dates.empty() && days_between(dates.back(), *date) != 1) {
            throw ParseError(where, header.line, c + 1,
                             "non-consecutive dates " + format_iso_date(dates.back()) + " and " +
                                 format_iso_date(*date));
        }
        dates.push_back(*date);
    }

    std::vector<std::string> names;
    std::unordered_set<std::string> seen;
    Matrix values(rows.size() - 1, dates.size());
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != header.fields.size()) {
            throw ParseError(where, row.line, row.fields.size(),
                             "expected " + std::to_string(header.fields.size()) + " fields, found " +
                                 std::to_string(row.fields.size()));
        }
        auto name = trimmed(row.fields[0]);
        if (name.empty()) {
            throw ParseError(where, row.line, 1, "empty region name");
        }
        if (!seen.insert(name).second) {
            throw ParseError(where, row.line, 1, "duplicate region '" + name + "'");
        }
        for (std::size_t c = 1; c < row.fields.size(); ++c) {
            const double v = csv::parse_number(row.fields[c], where, row.line, c + 1);
            if (v < 0.0) {
                throw ParseError(where, row.line, c + 1, "negative count " + trimmed(row.fields[c]));
            }
            values(r - 1, c - 1) = v;
        }
        names.push_back(std::move(name));
    }
    if (names.empty()) {
        throw InputError(where + ": no region rows");
    }

    std::optional<std::vector<std::int64_t>> populations;
    if (population_path) {
        populations = load_populations(*population_path, names);
    }
    return EpicurveMatrix(std::move(names), std::move(dates), std::move(values), std::move(populations));
}

std::vector<std::int64_t> load_populations(const std::filesystem::path& path,
                                           const std::vector<std::string>& region_names) {
    const std::string where = path.string();
    const auto rows = csv::read_file(path);
    if (rows.empty() || rows.front().fields.size() != 2) {
        throw InputError(where + ": expected a two-column 'region,population' header");
    }
    const auto index = index_by_name(region_names);
    std::vector<std::int64_t> out(region_names.size(), 0);
    std::vector<bool> filled(region_names.size(), false);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != 2) {
            throw ParseError(where, row.line, row.fields.size(), "expected 2 fields");
        }
        const auto name = trimmed(row.fields[0]);
        const auto it = index.find(name);
        if (it == index.end()) {
            throw ParseError(where, row.line, 1, "region mismatch: '" + name + "' is not in the epicurves");
        }
        if (filled[it->second]) {
            throw ParseError(where, row.line, 1, "duplicate region '" + name + "'");
        }
        const auto text = trimmed(row.fields[1]);
        std::int64_t value = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (text.empty()) {
            throw ParseError(where, row.line, 2, "missing value");
        }
        if (ec != std::errc{} || ptr != text.data() + text.size()) {
            throw ParseError(where, row.line, 2, "population is not an integer: '" + text + "'");
        }
        if (value <= 0) {
            throw ParseError(where, row.line, 2, "population must be positive for region '" + name + "'");
        }
        out[it->second] = value;
        filled[it->second] = true;
    }
    for (std::size_t i = 0; i < filled.size(); ++i) {
        if (!filled[i]) {
            throw InputError(where + ": region mismatch: no population for '" + region_names[i] + "'");
        }
    }
    return out;
}

FeatureTable load_features(const std::filesystem::path& path, const EpicurveMatrix& epicurves) {
    const std::string where = path.string();
    const auto rows = csv::read_file(path);
    if (rows.empty()) {
        throw InputError(where + ": empty file");
    }
    const auto& header = rows.front();
    if (header.fields.size() < 2) {
        throw ParseError(where, header.line, 1, "header needs a region column and at least one feature");
    }
    std::vector<std::string> feature_names;
    for (std::size_t c = 1; c < header.fields.size(); ++c) {
        feature_names.push_back(trimmed(header.fields[c]));
    }

    const auto& names = epicurves.region_names();
    const auto index = index_by_name(names);
    Matrix values(names.size(), feature_names.size(), std::numeric_limits<double>::quiet_NaN());
    std::vector<bool> filled(names.size(), false);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != header.fields.size()) {
            throw ParseError(where, row.line, row.fields.size(),
                             "expected " + std::to_string(header.fields.size()) + " fields, found " +
                                 std::to_string(row.fields.size()));
        }
        const auto name = trimmed(row.fields[0]);
        const auto it = index.find(name);
        if (it == index.end()) {
            throw ParseError(where, row.line, 1, "region mismatch: '" + name + "' is not in the epicurves");
        }
        if (filled[it->second]) {
            throw ParseError(where, row.line, 1, "duplicate region '" + name + "'");
        }
        for (std::size_t c = 1; c < row.fields.size(); ++c) {
            values(it->second, c - 1) = csv::parse_number(row.fields[c], where, row.line, c + 1);
        }
        filled[it->second] = true;
    }
    std::string absent;
    for (std::size_t i = 0; i < filled.size(); ++i) {
        if (!filled[i]) {
            absent += (absent.empty() ? "'" : ", '") + names[i] + "'";
        }
    }
    if (!absent.empty()) {
        throw InputError(where + ": region mismatch: missing " + absent);
    }
    return FeatureTable(names, std::move(feature_names), std::move(values));
}

WindowSplit split_windows(const EpicurveMatrix& m, std::size_t window_len) {
    if (window_len == 0) {
        throw std::invalid_argument("split_windows: window length must be positive");
    }
    if (m.day_count() < window_len) {
        throw InputError("split_windows: " + std::to_string(m.day_count()) + " days is shorter than one " +
                         std::to_string(window_len) + "-day window");
    }
    WindowSplit split;
    const std::size_t count = m.day_count() / window_len;
    split.dropped_days = m.day_count() - count * window_len;
    split.windows.reserve(count);
    for (std::size_t w = 0; w < count; ++w) {
        const std::size_t first = w * window_len;
        split.windows.push_back(
            Window{w, m.dates()[first], m.dates()[first + window_len - 1], m.slice_days(first, window_len)});
    }
    return split;
}

void write_epicurves_csv(std::ostream& out, const EpicurveMatrix& m) {
    out << "region";
    for (const auto& d : m.dates()) {
        out << ',' << format_iso_date(d);
    }
    out << '\n';
    for (std::size_t r = 0; r < m.region_count(); ++r) {
        out << csv::escape(m.region_names()[r]);
        for (double v : m.values().row(r)) {
            out << ',' << format_number(v);
        }
        out << '\n';
    }
}

void write_populations_csv(std::ostream& out, const EpicurveMatrix& m) {
    if (!m.populations()) {
        throw std::invalid_argument("write_populations_csv: matrix has no populations");
    }
    out << "region,population\n";
    for (std::size_t r = 0; r < m.region_count(); ++r) {
        out << csv::escape(m.region_names()[r]) << ',' << (*m.populations())[r] << '\n';
    }
}

void write_features_csv(std::ostream& out, const FeatureTable& f) {
    out << "region";
    for (const auto& name : f.feature_names()) {
        out << ',' << csv::escape(name);
    }
    out << '\n';
    for (std::size_t r = 0; r < f.region_names().size(); ++r) {
        out << csv::escape(f.region_names()[r]);
        for (double v : f.values().row(r)) {
            out << ',' << format_number(v);
        }
        out << '\n';
    }
}

std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

} // namespace epiclust
