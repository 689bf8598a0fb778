#pragma once

#include <span>
#include <string>
#include <vector>

#include "fceval/simulate.hpp"

namespace fceval {

enum class ProxyKind {
  SquaredReturn,
  RealizedVariance,
  RealizedThird,
  CorrectedFourth,
  AdjustedLogRange,
};

std::string proxy_kind_name(ProxyKind kind);
ProxyKind proxy_kind_from_name(const std::string& name);
int proxy_target_moment(ProxyKind kind);

struct ProxySeries {
  std::vector<double> values;
  ProxyKind kind = ProxyKind::SquaredReturn;
  int target_moment = 2;
};

// values[t] = r_t^2
ProxySeries squared_return(std::span<const double> daily_returns);
// values[t] = sum_i r_{t,i}^2
ProxySeries realized_variance(const IntradayPanel& panel);
// values[t] = sum_i r_{t,i}^3
ProxySeries realized_third(const IntradayPanel& panel);
// values[t] = sum_i r_{t,i}^4 + 6 sum_{i<j} r_{t,i}^2 r_{t,j}^2,
// with the cross term computed as ((sum r^2)^2 - sum r^4) / 2.
ProxySeries corrected_fourth(const IntradayPanel& panel);
// Squared adjusted log range ((max-min of the within-day cumulative return
// path, day-open included) / (2 sqrt(log 2)))^2.
ProxySeries adjusted_log_range(const IntradayPanel& panel);

// For moment n: the daily-return proxy (r^n) and the intraday proxy
// (RV / RM(3) / cRM(4)).
ProxySeries daily_power_proxy(std::span<const double> daily_returns, int moment);
ProxySeries make_proxy(const IntradayPanel& panel, ProxyKind kind);

void write_proxy_csv(const ProxySeries& series, const std::string& path);
ProxySeries read_proxy_csv(const std::string& path, ProxyKind kind);

}  // namespace fceval
