#pragma once

#include <cstddef>
#include <span>

// Data-parallel reduction kernels used by the proxy constructors, the loss
// evaluators and the HAC variance estimator. Every kernel has a scalar
// reference implementation; on x86-64 an AVX2 variant is selected at runtime
// when the CPU supports it. The two variants agree up to floating-point
// reassociation and are equivalence-tested against each other.

namespace fceval::kernels {

struct PowerSums {
  double s1 = 0.0;  // sum x
  double s2 = 0.0;  // sum x^2
  double s3 = 0.0;  // sum x^3
  double s4 = 0.0;  // sum x^4
};

enum class Backend { Scalar, Avx2 };

// Backend actually in use (Avx2 only if compiled in and supported by the CPU).
Backend active_backend();

// Test hook: pin the backend. Pinning Avx2 on a CPU without it is an error.
void force_backend(Backend b);
void reset_backend();

double sum(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
PowerSums power_sums(std::span<const double> x);

// sum_{t=lag}^{n-1} (x[t]-mean)*(x[t-lag]-mean)
double centered_lag_dot(std::span<const double> x, double mean, std::size_t lag);

// out[i] = (x1[i]-v[i])^2 - (x2[i]-v[i])^2, the MSE loss-difference series
void mse_loss_diff(std::span<const double> x1, std::span<const double> x2,
                   std::span<const double> v, std::span<double> out);

namespace scalar {
double sum(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
PowerSums power_sums(std::span<const double> x);
double centered_lag_dot(std::span<const double> x, double mean, std::size_t lag);
void mse_loss_diff(std::span<const double> x1, std::span<const double> x2,
                   std::span<const double> v, std::span<double> out);
}  // namespace scalar

#if defined(FCEVAL_BUILD_AVX2)
namespace avx2 {
double sum(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
PowerSums power_sums(std::span<const double> x);
double centered_lag_dot(std::span<const double> x, double mean, std::size_t lag);
void mse_loss_diff(std::span<const double> x1, std::span<const double> x2,
                   std::span<const double> v, std::span<double> out);
}  // namespace avx2
#endif

}  // namespace fceval::kernels
