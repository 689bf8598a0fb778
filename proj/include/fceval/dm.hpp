#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "fceval/errors.hpp"

namespace fceval {

// Long-run variance estimator for the loss-difference series.
struct HacVariant {
  enum class Kind { Lag0, CompromiseLag1, HStep, Bartlett };
  Kind kind = Kind::CompromiseLag1;
  int h = 2;  // HStep only: tau^2 = g0 + 2 sum_{j<h} g_j

  static HacVariant lag0() { return {Kind::Lag0, 1}; }
  static HacVariant compromise_lag1() { return {Kind::CompromiseLag1, 2}; }
  static HacVariant h_step(int h);
  static HacVariant bartlett() { return {Kind::Bartlett, 0}; }
  static HacVariant from_name(const std::string& name);
  std::string name() const;
};

struct HacEstimate {
  double tau2 = 0.0;
  bool fallback = false;  // estimator was <= 0, fell back to gamma_0
};

// Significance levels of the three-zone verdicts.
inline constexpr std::array<double, 3> kZoneLevels = {0.10, 0.05, 0.01};
// Standard-normal quantiles Phi^{-1}(1 - eta) for the levels above.
inline constexpr std::array<double, 3> kZoneQuantiles = {
    1.2815515655446004, 1.6448536269514722, 2.3263478740408408};

struct ZoneVerdict {
  std::array<bool, 3> red{};    // H0- rejected at 0.10 / 0.05 / 0.01
  std::array<bool, 3> green{};  // H0+ rejected at 0.10 / 0.05 / 0.01

  bool is_yellow() const { return !red[0] && !green[0]; }
  // 0 = yellow; +1..+3 light red..dark red; -1..-3 light green..dark green.
  int intensity() const;
  std::string tag() const;  // e.g. "dark-red", "yellow"
};

struct DMResult {
  double S = 0.0;
  int n = 0;
  double tau2 = 0.0;
  double mean_diff = 0.0;
  bool hac_fallback = false;
  ZoneVerdict zone;
};

// Minimum series length accepted by the test.
inline constexpr int kMinDmLength = 30;

// gamma_j = (1/n) sum_{t=j}^{n-1} (d_t - dbar)(d_{t-j} - dbar)
double sample_autocov(std::span<const double> d, std::size_t lag);

HacEstimate hac_variance(std::span<const double> d, const HacVariant& variant);

DMResult dm_statistic(std::span<const double> d,
                      const HacVariant& variant = HacVariant::compromise_lag1());

ZoneVerdict three_zone(double s);

}  // namespace fceval
