// csv.hpp - Minimal CSV emit and parse. Numbers use the shortest
// decimal form that round-trips to the same double.
//
// Copyright (c) 2026 ubinc contributors.
// Licensed under the MIT License. See LICENSE file for details.
//

#pragma once

#include <string>
#include <vector>

namespace ubinc {

std::string csv_number(double v);

// Inverse of csv_number; throws std::invalid_argument on junk.
double parse_csv_number(const std::string& s);

// Joins fields with commas and appends a newline. Fields must not
// contain commas or newlines; there is no quoting.
std::string csv_row(const std::vector<std::string>& fields);

std::vector<std::vector<std::string>> parse_csv(const std::string& text);

}  // namespace ubinc
