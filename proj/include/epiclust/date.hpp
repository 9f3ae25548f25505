#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace epiclust {

using Date = std::chrono::year_month_day;

/// Parses a strict `YYYY-MM-DD` date. Returns nullopt on any deviation.
std::optional<Date> parse_iso_date(std::string_view text);

std::string format_iso_date(const Date& d);

/// Whole days from `from` to `to` (negative when `to` precedes `from`).
long days_between(const Date& from, const Date& to);

Date add_days(const Date& d, long n);

} // namespace epiclust
