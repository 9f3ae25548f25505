#include "csv.hpp"

#include "epiclust/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

namespace epiclust::csv {

std::vector<std::string> split_record(const std::string& line, const std::string& path, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current.push_back(c);
            }
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
            was_quoted = false;
        } else if (c == '"') {
            if (!current.empty() || was_quoted) {
                throw ParseError(path, line_no, fields.size() + 1, "stray quote inside unquoted field");
            }
            quoted = true;
            was_quoted = true;
        } else {
            if (was_quoted) {
                throw ParseError(path, line_no, fields.size() + 1, "text after closing quote");
            }
            current.push_back(c);
        }
    }
    if (quoted) {
        throw ParseError(path, line_no, fields.size() + 1, "unterminated quoted field");
    }
    fields.push_back(std::move(current));
    return fields;
}

std::vector<Row> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open " + path.string());
    }
    std::vector<Row> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) {
            line.erase(0, 3);
        }
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        rows.push_back({line_no, split_record(line, path.string(), line_no)});
    }
    return rows;
}

std::string escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) {
        return field;
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

double parse_number(const std::string& text, const std::string& path, std::size_t row, std::size_t column) {
    const auto first = text.find_first_not_of(" \t");
    if (first == std::string::npos) {
        throw ParseError(path, row, column, "missing value");
    }
    const auto last = text.find_last_not_of(" \t");
    const char* begin = text.data() + first;
    const char* end = text.data() + last + 1;
    if (*begin == '+') {
        ++begin;
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        throw ParseError(path, row, column, "non-numeric value '" + text + "'");
    }
    return value;
}

} // namespace epiclust::csv
