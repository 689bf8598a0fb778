#include "fceval/kernels.hpp"

#include <cassert>

namespace fceval::kernels::scalar {

double sum(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s;
}

double dot(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

PowerSums power_sums(std::span<const double> x) {
  PowerSums p;
  for (double v : x) {
    const double v2 = v * v;
    p.s1 += v;
    p.s2 += v2;
    p.s3 += v2 * v;
    p.s4 += v2 * v2;
  }
  return p;
}

double centered_lag_dot(std::span<const double> x, double mean, std::size_t lag) {
  assert(lag < x.size());
  double s = 0.0;
  for (std::size_t t = lag; t < x.size(); ++t)
    s += (x[t] - mean) * (x[t - lag] - mean);
  return s;
}

void mse_loss_diff(std::span<const double> x1, std::span<const double> x2,
                   std::span<const double> v, std::span<double> out) {
  assert(x1.size() == x2.size() && x1.size() == v.size() && x1.size() == out.size());
  for (std::size_t i = 0; i < x1.size(); ++i) {
    const double d1 = x1[i] - v[i];
    const double d2 = x2[i] - v[i];
    out[i] = d1 * d1 - d2 * d2;
  }
}

}  // namespace fceval::kernels::scalar
