#pragma once

// Minimal RFC 4180 reader shared by the loaders.

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace epiclust::csv {

struct Row {
    /// 1-based physical line number.
    std::size_t line = 0;
    std::vector<std::string> fields;
};

/// Reads every non-blank record. Accepts LF or CRLF and a leading UTF-8 BOM.
/// Throws InputError if the file cannot be opened, ParseError on a bad quote.
std::vector<Row> read_file(const std::filesystem::path& path);

std::vector<std::string> split_record(const std::string& line, const std::string& path, std::size_t line_no);

/// Quotes the field if it contains a comma, quote or line break.
std::string escape(const std::string& field);

/// Strict finite double, surrounding blanks allowed. Throws ParseError.
double parse_number(const std::string& text, const std::string& path, std::size_t row, std::size_t column);

} // namespace epiclust::csv
