#include "fceval/kernels.hpp"

#include <cassert>
#include <immintrin.h>

namespace fceval::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

}  // namespace

double sum(std::span<const double> x) {
  const std::size_t n = x.size();
  const double* p = x.data();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(p + i));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(p + i + 4));
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(p + i));
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += p[i];
  return s;
}

double dot(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  const std::size_t n = x.size();
  const double* px = x.data();
  const double* py = y.data();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(px + i), _mm256_loadu_pd(py + i), acc);
  double s = hsum(acc);
  for (; i < n; ++i) s += px[i] * py[i];
  return s;
}

PowerSums power_sums(std::span<const double> x) {
  const std::size_t n = x.size();
  const double* p = x.data();
  __m256d a1 = _mm256_setzero_pd();
  __m256d a2 = _mm256_setzero_pd();
  __m256d a3 = _mm256_setzero_pd();
  __m256d a4 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(p + i);
    const __m256d v2 = _mm256_mul_pd(v, v);
    a1 = _mm256_add_pd(a1, v);
    a2 = _mm256_add_pd(a2, v2);
    a3 = _mm256_fmadd_pd(v2, v, a3);
    a4 = _mm256_fmadd_pd(v2, v2, a4);
  }
  PowerSums out{hsum(a1), hsum(a2), hsum(a3), hsum(a4)};
  for (; i < n; ++i) {
    const double v = p[i];
    const double v2 = v * v;
    out.s1 += v;
    out.s2 += v2;
    out.s3 += v2 * v;
    out.s4 += v2 * v2;
  }
  return out;
}

double centered_lag_dot(std::span<const double> x, double mean, std::size_t lag) {
  assert(lag < x.size());
  const std::size_t n = x.size();
  const double* p = x.data();
  const __m256d m = _mm256_set1_pd(mean);
  __m256d acc = _mm256_setzero_pd();
  std::size_t t = lag;
  for (; t + 4 <= n; t += 4) {
    const __m256d a = _mm256_sub_pd(_mm256_loadu_pd(p + t), m);
    const __m256d b = _mm256_sub_pd(_mm256_loadu_pd(p + t - lag), m);
    acc = _mm256_fmadd_pd(a, b, acc);
  }
  double s = hsum(acc);
  for (; t < n; ++t) s += (p[t] - mean) * (p[t - lag] - mean);
  return s;
}

void mse_loss_diff(std::span<const double> x1, std::span<const double> x2,
                   std::span<const double> v, std::span<double> out) {
  assert(x1.size() == x2.size() && x1.size() == v.size() && x1.size() == out.size());
  const std::size_t n = v.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d pv = _mm256_loadu_pd(v.data() + i);
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(x1.data() + i), pv);
    const __m256d d2 = _mm256_sub_pd(_mm256_loadu_pd(x2.data() + i), pv);
    const __m256d r = _mm256_fmsub_pd(d1, d1, _mm256_mul_pd(d2, d2));
    _mm256_storeu_pd(out.data() + i, r);
  }
  for (; i < n; ++i) {
    const double d1 = x1[i] - v[i];
    const double d2 = x2[i] - v[i];
    out[i] = d1 * d1 - d2 * d2;
  }
}

}  // namespace fceval::kernels::avx2
