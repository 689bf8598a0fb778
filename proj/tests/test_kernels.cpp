#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fceval/kernels.hpp"
#include "fceval/rng.hpp"

using namespace fceval;
namespace k = fceval::kernels;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t stream) {
  CounterRng rng(42, stream);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rng.normal(i) * 2.0 + 0.3;
  return x;
}

}  // namespace

TEST_CASE("scalar sum/dot/power_sums on tiny hand inputs") {
  const std::vector<double> x = {1.0, 2.0, 3.0};
  CHECK(k::scalar::sum(x) == 6.0);
  CHECK(k::scalar::dot(x, x) == 14.0);
  const auto ps = k::scalar::power_sums(x);
  CHECK(ps.s1 == 6.0);
  CHECK(ps.s2 == 14.0);
  CHECK(ps.s3 == 36.0);
  CHECK(ps.s4 == 98.0);
}

TEST_CASE("centered_lag_dot matches direct loop") {
  const std::vector<double> x = {1.0, -1.0, 2.0, 0.5, -0.5, 3.0};
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= x.size();
  for (std::size_t lag = 0; lag < x.size(); ++lag) {
    double want = 0.0;
    for (std::size_t t = lag; t < x.size(); ++t)
      want += (x[t] - mean) * (x[t - lag] - mean);
    CHECK(k::scalar::centered_lag_dot(x, mean, lag) == doctest::Approx(want).epsilon(1e-15));
  }
}

TEST_CASE("mse_loss_diff scalar matches formula") {
  const std::vector<double> x1 = {1.0, 2.0}, x2 = {1.5, 1.0}, v = {1.2, 2.5};
  std::vector<double> out(2);
  k::scalar::mse_loss_diff(x1, x2, v, out);
  for (int i = 0; i < 2; ++i) {
    const double want = (x1[i] - v[i]) * (x1[i] - v[i]) - (x2[i] - v[i]) * (x2[i] - v[i]);
    CHECK(out[i] == want);
  }
}

TEST_CASE("dispatched kernels agree with scalar reference") {
  INFO("active backend: ", k::active_backend() == k::Backend::Avx2 ? "avx2" : "scalar");
  for (std::size_t n : {0ull, 1ull, 3ull, 4ull, 5ull, 7ull, 8ull, 63ull, 64ull, 1000ull,
                        1001ull}) {
    const auto x = random_vec(n, n);
    const auto y = random_vec(n, n + 100);
    CAPTURE(n);
    CHECK(k::sum(x) == doctest::Approx(k::scalar::sum(x)).epsilon(1e-13));
    CHECK(k::dot(x, y) == doctest::Approx(k::scalar::dot(x, y)).epsilon(1e-13));
    const auto a = k::power_sums(x);
    const auto b = k::scalar::power_sums(x);
    CHECK(a.s1 == doctest::Approx(b.s1).epsilon(1e-13));
    CHECK(a.s2 == doctest::Approx(b.s2).epsilon(1e-13));
    CHECK(a.s3 == doctest::Approx(b.s3).epsilon(1e-12));
    CHECK(a.s4 == doctest::Approx(b.s4).epsilon(1e-12));
    const double mean = n ? k::scalar::sum(x) / n : 0.0;
    for (std::size_t lag : {0ull, 1ull, 2ull, 5ull})
      CHECK(k::centered_lag_dot(x, mean, lag) ==
            doctest::Approx(k::scalar::centered_lag_dot(x, mean, lag)).epsilon(1e-12));
    std::vector<double> o1(n), o2(n);
    k::mse_loss_diff(x, y, x, o1);
    k::scalar::mse_loss_diff(x, y, x, o2);
    for (std::size_t i = 0; i < n; ++i) CHECK(o1[i] == doctest::Approx(o2[i]).epsilon(1e-13));
  }
}

TEST_CASE("force_backend pins and reset restores") {
  const auto def = k::active_backend();
  k::force_backend(k::Backend::Scalar);
  CHECK(k::active_backend() == k::Backend::Scalar);
  const std::vector<double> x = {1.0, 2.0, 3.0, 4.0, 5.0};
  CHECK(k::sum(x) == 15.0);
  k::reset_backend();
  CHECK(k::active_backend() == def);
}
