#include "fceval/dm.hpp"

#include <cmath>

#include "fceval/kernels.hpp"

namespace fceval {

HacVariant HacVariant::h_step(int h) {
  if (h < 1) throw ParameterError("HStep HAC: h must be >= 1");
  return {Kind::HStep, h};
}

HacVariant HacVariant::from_name(const std::string& name) {
  if (name == "lag0") return lag0();
  if (name == "compromise" || name == "compromise_lag1") return compromise_lag1();
  if (name == "bartlett") return bartlett();
  if (name.rfind("hstep", 0) == 0 && name.size() > 5)
    return h_step(std::stoi(name.substr(5)));
  throw ParameterError("unknown HAC variant: " + name);
}

std::string HacVariant::name() const {
  switch (kind) {
    case Kind::Lag0: return "lag0";
    case Kind::CompromiseLag1: return "compromise_lag1";
    case Kind::HStep: return "hstep" + std::to_string(h);
    case Kind::Bartlett: return "bartlett";
  }
  return "unknown";
}

int ZoneVerdict::intensity() const {
  for (int k = 2; k >= 0; --k) {
    if (red[k]) return k + 1;
    if (green[k]) return -(k + 1);
  }
  return 0;
}

std::string ZoneVerdict::tag() const {
  switch (intensity()) {
    case 3: return "dark-red";
    case 2: return "red";
    case 1: return "light-red";
    case -1: return "light-green";
    case -2: return "green";
    case -3: return "dark-green";
    default: return "yellow";
  }
}

double sample_autocov(std::span<const double> d, std::size_t lag) {
  const std::size_t n = d.size();
  if (lag >= n) throw ParameterError("sample_autocov: lag must be < n");
  const double mean = kernels::sum(d) / static_cast<double>(n);
  return kernels::centered_lag_dot(d, mean, lag) / static_cast<double>(n);
}

HacEstimate hac_variance(std::span<const double> d, const HacVariant& variant) {
  const std::size_t n = d.size();
  if (n < static_cast<std::size_t>(kMinDmLength))
    throw ParameterError("hac_variance: need at least " +
                         std::to_string(kMinDmLength) + " observations");
  const double g0 = sample_autocov(d, 0);
  if (!(g0 > 0.0)) throw DataError("hac_variance: degenerate (zero-variance) series");

  double tau2 = g0;
  switch (variant.kind) {
    case HacVariant::Kind::Lag0:
      break;
    case HacVariant::Kind::CompromiseLag1:
      tau2 = g0 + 2.0 * sample_autocov(d, 1);
      break;
    case HacVariant::Kind::HStep:
      for (int j = 1; j < variant.h; ++j) tau2 += 2.0 * sample_autocov(d, j);
      break;
    case HacVariant::Kind::Bartlett: {
      const int J = static_cast<int>(std::floor(std::pow(static_cast<double>(n), 0.25)));
      for (int j = 1; j <= J; ++j)
        tau2 += 2.0 * (1.0 - static_cast<double>(j) / J) * sample_autocov(d, j);
      break;
    }
  }
  if (tau2 > 0.0) return {tau2, false};
  return {g0, true};
}

DMResult dm_statistic(std::span<const double> d, const HacVariant& variant) {
  const std::size_t n = d.size();
  if (n < static_cast<std::size_t>(kMinDmLength))
    throw ParameterError("dm_statistic: need at least " +
                         std::to_string(kMinDmLength) + " observations");
  const auto est = hac_variance(d, variant);
  DMResult res;
  res.n = static_cast<int>(n);
  res.tau2 = est.tau2;
  res.hac_fallback = est.fallback;
  res.mean_diff = kernels::sum(d) / static_cast<double>(n);
  res.S = std::sqrt(static_cast<double>(n)) * res.mean_diff / std::sqrt(est.tau2);
  res.zone = three_zone(res.S);
  return res;
}

ZoneVerdict three_zone(double s) {
  if (!std::isfinite(s)) throw DataError("three_zone: non-finite statistic");
  ZoneVerdict z;
  for (std::size_t k = 0; k < kZoneLevels.size(); ++k) {
    z.red[k] = s >= kZoneQuantiles[k];
    z.green[k] = s <= -kZoneQuantiles[k];
  }
  return z;
}

}  // namespace fceval
