#include "fceval/kernels.hpp"

#include <stdexcept>

namespace fceval::kernels {

namespace {

Backend detect() {
#if defined(FCEVAL_BUILD_AVX2) && defined(__GNUC__)
  if (__builtin_cpu_supports("avx2")) return Backend::Avx2;
#endif
  return Backend::Scalar;
}

Backend& current() {
  static Backend b = detect();
  return b;
}

}  // namespace

Backend active_backend() { return current(); }

void force_backend(Backend b) {
  if (b == Backend::Avx2 && detect() != Backend::Avx2)
    throw std::runtime_error("AVX2 backend not available on this CPU/build");
  current() = b;
}

void reset_backend() { current() = detect(); }

double sum(std::span<const double> x) {
#if defined(FCEVAL_BUILD_AVX2)
  if (current() == Backend::Avx2) return avx2::sum(x);
#endif
  return scalar::sum(x);
}

double dot(std::span<const double> x, std::span<const double> y) {
#if defined(FCEVAL_BUILD_AVX2)
  if (current() == Backend::Avx2) return avx2::dot(x, y);
#endif
  return scalar::dot(x, y);
}

PowerSums power_sums(std::span<const double> x) {
#if defined(FCEVAL_BUILD_AVX2)
  if (current() == Backend::Avx2) return avx2::power_sums(x);
#endif
  return scalar::power_sums(x);
}

double centered_lag_dot(std::span<const double> x, double mean, std::size_t lag) {
#if defined(FCEVAL_BUILD_AVX2)
  if (current() == Backend::Avx2) return avx2::centered_lag_dot(x, mean, lag);
#endif
  return scalar::centered_lag_dot(x, mean, lag);
}

void mse_loss_diff(std::span<const double> x1, std::span<const double> x2,
                   std::span<const double> v, std::span<double> out) {
#if defined(FCEVAL_BUILD_AVX2)
  if (current() == Backend::Avx2) return avx2::mse_loss_diff(x1, x2, v, out);
#endif
  return scalar::mse_loss_diff(x1, x2, v, out);
}

}  // namespace fceval::kernels
