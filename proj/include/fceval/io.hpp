#pragma once

#include <string>
#include <vector>

namespace fceval {

// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

// Split one CSV line on commas (no quoting; our formats never need it).
std::vector<std::string> split_csv_line(const std::string& line);

double parse_double(const std::string& s, const std::string& context);
long long parse_int(const std::string& s, const std::string& context);

}  // namespace fceval
