#include "fceval/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "fceval/errors.hpp"

namespace fceval {

std::string format_double(double v) {
  char buf[40];
  // Try increasing precision until the value round-trips.
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

double parse_double(const std::string& s, const std::string& context) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw DataError(context + ": cannot parse number '" + s + "'");
  return v;
}

long long parse_int(const std::string& s, const std::string& context) {
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0')
    throw DataError(context + ": cannot parse integer '" + s + "'");
  return v;
}

}  // namespace fceval
