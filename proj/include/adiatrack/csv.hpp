#pragma once

#include <string>
#include <vector>

namespace adiatrack {

// Shortest decimal representation that round-trips to the same double,
// capped at 12 significant digits. Keeps CSV diffs reproducible.
std::string format_double(double value);

// Minimal CSV assembly: comma join, '\n' line ends, no quoting (fields never
// contain commas here).
std::string csv_row(const std::vector<std::string>& fields);

}  // namespace adiatrack
