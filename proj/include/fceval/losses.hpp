#pragma once

#include <functional>
#include <limits>
#include <string>

#include "fceval/errors.hpp"

namespace fceval {

// Strictly convex generator phi with derivative phi', valid on an open
// interval. Together with a moment map it defines a consistent loss for the
// corresponding generalized moment.
struct BregmanGenerator {
  std::function<double(double)> phi;
  std::function<double(double)> phi_prime;
  double domain_lo = -std::numeric_limits<double>::infinity();
  double domain_hi = std::numeric_limits<double>::infinity();
  std::string name;

  bool contains(double t) const { return t > domain_lo && t < domain_hi; }
  void require(double t, const char* what) const;

  // phi(t) = t^2, domain all reals. Yields the squared-error loss.
  static BregmanGenerator squared();
  // phi(t) = -log t, domain (0, inf). Yields the QLIKE loss
  // v/x - log(v/x) - 1.
  static BregmanGenerator negative_log();
};

// A consistent loss for the n-th conditional moment: the Bregman generator
// plus the moment power (h(y) = y^n); the loss itself is evaluated against a
// proxy value v standing in for h(y).
struct MomentLossSpec {
  BregmanGenerator generator;
  int moment_power = 2;
  std::string label;

  static MomentLossSpec mse(int moment_power = 2);
  static MomentLossSpec qlike(int moment_power = 2);
};

// Loss for a ratio of moments E[h(Y)]/E[s(Y)]; s must be strictly positive.
struct RatioLossSpec {
  BregmanGenerator generator;
  std::function<double(double)> numerator_map;    // h
  std::function<double(double)> denominator_map;  // s, > 0
  std::string label;
};

// Coefficients of the loss difference as an affine function of the proxy:
// delta(x1, x2, v) = intercept + slope * v.
struct AffineDiffCoefficients {
  double intercept = 0.0;
  double slope = 0.0;

  double operator()(double v) const { return intercept + slope * v; }
};

// L(x, v) = phi(v) - phi(x) - phi'(x) (v - x). Nonnegative, zero iff x == v.
double bregman_loss(const MomentLossSpec& spec, double forecast, double proxy_value);

// bregman_loss(x1, v) - bregman_loss(x2, v), by direct subtraction.
double loss_difference(const MomentLossSpec& spec, double x1, double x2, double v);

// The same difference as an affine function of the proxy value.
AffineDiffCoefficients loss_diff_affine(const MomentLossSpec& spec, double x1, double x2);

// L(x, y) = s(y)(phi(y) - phi(x)) - phi'(x)(h(y) - x s(y)) - phi'(y)(h(y) - y s(y))
double ratio_loss(const RatioLossSpec& spec, double forecast, double outcome);

// Loss difference for the ratio case, affine in the two proxy values
// (v_h, v_s) standing in for (h(y), s(y)).
double ratio_loss_difference(const RatioLossSpec& spec, double x1, double x2,
                             double v_h, double v_s);

}  // namespace fceval
