#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dfd/common.hpp"

namespace dfd {

/// Minimal CSV: comma-separated, no quoting or escaping. Fields therefore
/// must not contain commas; the toolkit's ids and paths never do.
struct CsvFile {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<int> line_numbers;  // 1-based source line of each row
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    fields.push_back(field);
    return fields;
}

inline CsvFile read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(path + ": cannot open file");
    CsvFile csv;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv_line(line);
        if (line_no == 1 || csv.header.empty()) {
            csv.header = std::move(fields);
        } else {
            csv.rows.push_back(std::move(fields));
            csv.line_numbers.push_back(line_no);
        }
    }
    if (csv.header.empty()) fail(path + ": empty CSV file");
    return csv;
}

inline double parse_real(const std::string& s, const std::string& context) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) fail(context + ": trailing characters in number '" + s + "'");
        return v;
    } catch (const std::invalid_argument&) {
        fail(context + ": not a number: '" + s + "'");
    } catch (const std::out_of_range&) {
        fail(context + ": number out of range: '" + s + "'");
    }
}

}  // namespace dfd
