// Copyright (c) 2026 ubinc contributors.
// Licensed under the MIT License. See LICENSE file for details.

#include "ubinc/csv.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace ubinc {

std::string csv_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw std::invalid_argument("cannot format number");
    return std::string(buf, ptr);
}

double parse_csv_number(const std::string& s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
        throw std::invalid_argument("cannot parse number '" + s + "'");
    }
    return v;
}

std::string csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const std::string& f = fields[i];
        if (f.find_first_of(",\n") != std::string::npos) {
            throw std::invalid_argument("csv field would need quoting: '" + f + "'");
        }
        if (i > 0) out += ',';
        out += f;
    }
    out += '\n';
    return out;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string field;
        std::istringstream fs(line);
        while (std::getline(fs, field, ',')) fields.push_back(field);
        if (!line.empty() && line.back() == ',') fields.push_back("");
        rows.push_back(std::move(fields));
    }
    return rows;
}

}  // namespace ubinc
