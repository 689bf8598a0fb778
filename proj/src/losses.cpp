#include "fceval/losses.hpp"

#include <cmath>
#include <sstream>

namespace fceval {

void BregmanGenerator::require(double t, const char* what) const {
  if (!contains(t)) {
    std::ostringstream os;
    os << name << " generator: " << what << " = " << t << " outside domain ("
       << domain_lo << ", " << domain_hi << ")";
    throw DomainError(os.str());
  }
}

BregmanGenerator BregmanGenerator::squared() {
  BregmanGenerator g;
  g.phi = [](double t) { return t * t; };
  g.phi_prime = [](double t) { return 2.0 * t; };
  g.name = "squared";
  return g;
}

BregmanGenerator BregmanGenerator::negative_log() {
  BregmanGenerator g;
  g.phi = [](double t) { return -std::log(t); };
  g.phi_prime = [](double t) { return -1.0 / t; };
  g.domain_lo = 0.0;
  g.name = "negative-log";
  return g;
}

MomentLossSpec MomentLossSpec::mse(int moment_power) {
  return {BregmanGenerator::squared(), moment_power, "MSE"};
}

MomentLossSpec MomentLossSpec::qlike(int moment_power) {
  return {BregmanGenerator::negative_log(), moment_power, "QLIKE"};
}

double bregman_loss(const MomentLossSpec& spec, double forecast, double proxy_value) {
  const auto& g = spec.generator;
  g.require(forecast, "forecast");
  g.require(proxy_value, "proxy value");
  return g.phi(proxy_value) - g.phi(forecast) -
         g.phi_prime(forecast) * (proxy_value - forecast);
}

double loss_difference(const MomentLossSpec& spec, double x1, double x2, double v) {
  return bregman_loss(spec, x1, v) - bregman_loss(spec, x2, v);
}

AffineDiffCoefficients loss_diff_affine(const MomentLossSpec& spec, double x1, double x2) {
  const auto& g = spec.generator;
  g.require(x1, "forecast x1");
  g.require(x2, "forecast x2");
  const double d1 = g.phi_prime(x1);
  const double d2 = g.phi_prime(x2);
  AffineDiffCoefficients c;
  c.intercept = (g.phi(x2) - x2 * d2) - (g.phi(x1) - x1 * d1);
  c.slope = d2 - d1;
  return c;
}

double ratio_loss(const RatioLossSpec& spec, double forecast, double outcome) {
  const auto& g = spec.generator;
  g.require(forecast, "forecast");
  g.require(outcome, "outcome");
  const double sy = spec.denominator_map(outcome);
  if (!(sy > 0.0)) throw DomainError(spec.label + ": denominator map s(y) <= 0");
  const double hy = spec.numerator_map(outcome);
  return sy * (g.phi(outcome) - g.phi(forecast)) -
         g.phi_prime(forecast) * (hy - forecast * sy) -
         g.phi_prime(outcome) * (hy - outcome * sy);
}

double ratio_loss_difference(const RatioLossSpec& spec, double x1, double x2,
                             double v_h, double v_s) {
  const auto& g = spec.generator;
  g.require(x1, "forecast x1");
  g.require(x2, "forecast x2");
  const double d1 = g.phi_prime(x1);
  const double d2 = g.phi_prime(x2);
  return (d2 - d1) * v_h +
         (x1 * d1 - g.phi(x1) - x2 * d2 + g.phi(x2)) * v_s;
}

}  // namespace fceval
