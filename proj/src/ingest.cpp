#include "fceval/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "fceval/io.hpp"

namespace fceval {

namespace {

constexpr std::int64_t kSecondsPerDay = 86400;

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

// RFC 3339 "YYYY-MM-DD[T ]HH:MM:SS" with optional 'Z' or +/-HH:MM offset.
std::int64_t parse_rfc3339(const std::string& s, const std::string& context) {
  std::tm tm{};
  int offset_sign = 0, off_h = 0, off_m = 0;
  char sep = 0, zone = 0;
  const int got = std::sscanf(s.c_str(), "%4d-%2d-%2d%c%2d:%2d:%2d%c%2d:%2d",
                              &tm.tm_year, &tm.tm_mon, &tm.tm_mday, &sep, &tm.tm_hour,
                              &tm.tm_min, &tm.tm_sec, &zone, &off_h, &off_m);
  if (got < 7 || (sep != 'T' && sep != ' '))
    throw DataError(context + ": cannot parse timestamp '" + s + "'");
  if (got >= 8 && zone != 'Z') {
    if (zone == '+') offset_sign = 1;
    else if (zone == '-') offset_sign = -1;
    else throw DataError(context + ": bad timezone in '" + s + "'");
    if (got != 10) throw DataError(context + ": bad timezone offset in '" + s + "'");
  }
  tm.tm_year -= 1900;
  tm.tm_mon -= 1;
  std::int64_t t = timegm(&tm);
  t -= offset_sign * (off_h * 3600 + off_m * 60);
  return t;
}

}  // namespace

GapPolicy gap_policy_from_name(const std::string& name) {
  if (name == "drop") return GapPolicy::Drop;
  if (name == "scale") return GapPolicy::Scale;
  throw ParameterError("gap policy must be 'drop' or 'scale'");
}

ParseReport parse_price_lines(const std::vector<std::string>& lines,
                              const std::string& context) {
  if (lines.empty()) throw DataError(context + ": empty input");
  std::size_t start = 0;
  {
    // Header required: timestamp,close
    std::string header = lines[0];
    if (!header.empty() && header.back() == '\r') header.pop_back();
    if (header != "timestamp,close")
      throw DataError(context + ": expected header 'timestamp,close'");
    start = 1;
  }
  ParseReport report;
  for (std::size_t i = start; i < lines.size(); ++i) {
    std::string line = lines[i];
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string ctx = context + ":" + std::to_string(i + 1);
    const auto f = split_csv_line(line);
    if (f.size() != 2) throw DataError(ctx + ": expected 2 fields");
    PriceRecord rec;
    rec.timestamp = all_digits(f[0]) ? parse_int(f[0], ctx) : parse_rfc3339(f[0], ctx);
    rec.close = parse_double(f[1], ctx);
    if (!(rec.close > 0.0)) throw DataError(ctx + ": non-positive price");
    report.records.push_back(rec);
  }
  if (report.records.empty()) throw DataError(context + ": no price rows");
  if (!std::is_sorted(report.records.begin(), report.records.end(),
                      [](const PriceRecord& a, const PriceRecord& b) {
                        return a.timestamp < b.timestamp;
                      })) {
    std::stable_sort(report.records.begin(), report.records.end(),
                     [](const PriceRecord& a, const PriceRecord& b) {
                       return a.timestamp < b.timestamp;
                     });
    report.reordered = true;
  }
  for (std::size_t i = 1; i < report.records.size(); ++i)
    if (report.records[i].timestamp == report.records[i - 1].timestamp)
      throw DataError(context + ": duplicate timestamp " +
                      std::to_string(report.records[i].timestamp));
  return report;
}

ParseReport parse_prices(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(is, line)) lines.push_back(line);
  return parse_price_lines(lines, path);
}

DailyAlignedSeries to_daily(const std::vector<PriceRecord>& records, GapPolicy policy) {
  DailyAlignedSeries out;
  DailyAlignedSeries::Day current;
  bool open = false;
  const auto flush = [&] {
    if (!open) return;
    const int k = static_cast<int>(current.hourly_returns.size());
    current.complete = (k == 24);
    if (current.complete || policy == GapPolicy::Scale) {
      double r = 0.0, rv = 0.0;
      for (double h : current.hourly_returns) {
        r += h;
        rv += h * h;
      }
      current.daily_return = r;
      current.rv = current.complete ? rv : rv * 24.0 / k;
      out.days.push_back(std::move(current));
    }
    current = {};
    open = false;
  };

  // A return stamped t covers (t_prev, t] and belongs to the UTC day of t.
  for (std::size_t i = 1; i < records.size(); ++i) {
    const std::int64_t t = records[i].timestamp;
    const std::int64_t day_start = (t / kSecondsPerDay) * kSecondsPerDay;
    if (!open || day_start != current.day_start) {
      flush();
      current.day_start = day_start;
      open = true;
    }
    current.hourly_returns.push_back(std::log(records[i].close / records[i - 1].close));
  }
  flush();
  if (out.days.empty())
    throw DataError("to_daily: no usable days after applying the gap policy");
  return out;
}

std::string format_utc_date(std::int64_t epoch_seconds) {
  std::time_t t = static_cast<std::time_t>(epoch_seconds);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", tm.tm_year + 1900, tm.tm_mon + 1,
                tm.tm_mday);
  return buf;
}

std::string daily_to_csv(const DailyAlignedSeries& series) {
  std::ostringstream os;
  os << "date,daily_return,rv24\n";
  for (const auto& d : series.days)
    os << format_utc_date(d.day_start) << ',' << format_double(d.daily_return) << ','
       << format_double(d.rv) << '\n';
  return os.str();
}

void write_daily_csv(const DailyAlignedSeries& series, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot open for writing: " + path);
  os << daily_to_csv(series);
}

DailyAlignedSeries read_daily_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open: " + path);
  std::string line;
  if (!std::getline(is, line) || line != "date,daily_return,rv24")
    throw DataError(path + ": bad daily header");
  DailyAlignedSeries out;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string ctx = path + ":" + std::to_string(lineno);
    const auto f = split_csv_line(line);
    if (f.size() != 3) throw DataError(ctx + ": expected 3 fields");
    DailyAlignedSeries::Day d;
    d.day_start = parse_rfc3339(f[0] + "T00:00:00Z", ctx);
    d.daily_return = parse_double(f[1], ctx);
    d.rv = parse_double(f[2], ctx);
    out.days.push_back(std::move(d));
  }
  return out;
}

}  // namespace fceval
