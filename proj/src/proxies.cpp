#include "fceval/proxies.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "fceval/io.hpp"
#include "fceval/kernels.hpp"

namespace fceval {

std::string proxy_kind_name(ProxyKind kind) {
  switch (kind) {
    case ProxyKind::SquaredReturn: return "squared_return";
    case ProxyKind::RealizedVariance: return "realized_variance";
    case ProxyKind::RealizedThird: return "realized_third";
    case ProxyKind::CorrectedFourth: return "corrected_fourth";
    case ProxyKind::AdjustedLogRange: return "adjusted_log_range";
  }
  return "unknown";
}

ProxyKind proxy_kind_from_name(const std::string& name) {
  if (name == "squared_return" || name == "r2") return ProxyKind::SquaredReturn;
  if (name == "realized_variance" || name == "rv") return ProxyKind::RealizedVariance;
  if (name == "realized_third" || name == "rm3") return ProxyKind::RealizedThird;
  if (name == "corrected_fourth" || name == "crm4") return ProxyKind::CorrectedFourth;
  if (name == "adjusted_log_range" || name == "range") return ProxyKind::AdjustedLogRange;
  throw ParameterError("unknown proxy kind: " + name);
}

int proxy_target_moment(ProxyKind kind) {
  switch (kind) {
    case ProxyKind::RealizedThird: return 3;
    case ProxyKind::CorrectedFourth: return 4;
    default: return 2;
  }
}

ProxySeries squared_return(std::span<const double> daily_returns) {
  ProxySeries s;
  s.kind = ProxyKind::SquaredReturn;
  s.target_moment = 2;
  s.values.reserve(daily_returns.size());
  for (double r : daily_returns) s.values.push_back(r * r);
  return s;
}

ProxySeries realized_variance(const IntradayPanel& panel) {
  ProxySeries s;
  s.kind = ProxyKind::RealizedVariance;
  s.target_moment = 2;
  s.values.resize(panel.days);
  for (int t = 0; t < panel.days; ++t)
    s.values[t] = kernels::power_sums(panel.day(t)).s2;
  return s;
}

ProxySeries realized_third(const IntradayPanel& panel) {
  ProxySeries s;
  s.kind = ProxyKind::RealizedThird;
  s.target_moment = 3;
  s.values.resize(panel.days);
  for (int t = 0; t < panel.days; ++t)
    s.values[t] = kernels::power_sums(panel.day(t)).s3;
  return s;
}

ProxySeries corrected_fourth(const IntradayPanel& panel) {
  ProxySeries s;
  s.kind = ProxyKind::CorrectedFourth;
  s.target_moment = 4;
  s.values.resize(panel.days);
  for (int t = 0; t < panel.days; ++t) {
    const auto p = kernels::power_sums(panel.day(t));
    // sum_{i<j} r_i^2 r_j^2 = ((sum r^2)^2 - sum r^4) / 2
    s.values[t] = p.s4 + 3.0 * (p.s2 * p.s2 - p.s4);
  }
  return s;
}

ProxySeries adjusted_log_range(const IntradayPanel& panel) {
  static const double kScale = 2.0 * std::sqrt(std::log(2.0));
  ProxySeries s;
  s.kind = ProxyKind::AdjustedLogRange;
  s.target_moment = 2;
  s.values.resize(panel.days);
  for (int t = 0; t < panel.days; ++t) {
    // Cumulative log-price path within the day, starting at the day open.
    double level = 0.0, lo = 0.0, hi = 0.0;
    for (double r : panel.day(t)) {
      level += r;
      lo = std::min(lo, level);
      hi = std::max(hi, level);
    }
    const double range = (hi - lo) / kScale;
    s.values[t] = range * range;
  }
  return s;
}

ProxySeries daily_power_proxy(std::span<const double> daily_returns, int moment) {
  if (moment < 2 || moment > 4)
    throw ParameterError("daily power proxy: moment must be 2, 3 or 4");
  ProxySeries s;
  s.kind = ProxyKind::SquaredReturn;
  s.target_moment = moment;
  s.values.reserve(daily_returns.size());
  for (double r : daily_returns) {
    const double r2 = r * r;
    s.values.push_back(moment == 2 ? r2 : (moment == 3 ? r2 * r : r2 * r2));
  }
  return s;
}

ProxySeries make_proxy(const IntradayPanel& panel, ProxyKind kind) {
  switch (kind) {
    case ProxyKind::SquaredReturn: return squared_return(panel.daily_returns);
    case ProxyKind::RealizedVariance: return realized_variance(panel);
    case ProxyKind::RealizedThird: return realized_third(panel);
    case ProxyKind::CorrectedFourth: return corrected_fourth(panel);
    case ProxyKind::AdjustedLogRange: return adjusted_log_range(panel);
  }
  throw ParameterError("make_proxy: unknown kind");
}

void write_proxy_csv(const ProxySeries& series, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot open for writing: " + path);
  os << "day,value\n";
  for (std::size_t t = 0; t < series.values.size(); ++t)
    os << t << ',' << format_double(series.values[t]) << '\n';
}

ProxySeries read_proxy_csv(const std::string& path, ProxyKind kind) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open: " + path);
  std::string line;
  if (!std::getline(is, line) || line != "day,value")
    throw DataError(path + ": bad proxy header");
  ProxySeries s;
  s.kind = kind;
  s.target_moment = proxy_target_moment(kind);
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 2)
      throw DataError(path + ":" + std::to_string(lineno) + ": expected 2 fields");
    s.values.push_back(parse_double(f[1], path + ":" + std::to_string(lineno)));
  }
  return s;
}

}  // namespace fceval
