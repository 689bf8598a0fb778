#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fceval/errors.hpp"
#include "fceval/rng.hpp"

namespace fceval {

struct GarchParams {
  double a0 = 0.02;
  double a1 = 0.08;
  double b = 0.85;

  void validate() const;
  double unconditional_variance() const { return a0 / (1.0 - a1 - b); }
};

// sigma_t^4 = omega + alpha r_{t-1}^4 + beta sigma_{t-1}^4 (power 4 recursion)
struct ApArchParams {
  double omega = 0.02;
  double alpha = 0.08;
  double beta = 0.75;

  // eps4 = E[eps^4] of the daily innovation (3 for normal).
  void validate(double eps4 = 3.0) const;
  double unconditional_sigma4(double eps4 = 3.0) const {
    return omega / (1.0 - eps4 * alpha - beta);
  }
};

enum class InnovationKind { Normal, Nig };

// NIG(mu, delta, alpha, beta) in the Barndorff-Nielsen parameterization.
struct NigParams {
  double mu = 0.0;
  double delta = 1.0;
  double alpha = 1.0;
  double beta = 0.0;

  double gamma() const;
  double mean() const;
  double variance() const;
  double skewness() const;
  double kurtosis() const;  // plain (not excess) kurtosis
  // Raw third/fourth moments for a zero-mean member.
  double third_moment() const;
  double fourth_moment() const;
};

// Centering/scaling recipe: gamma = sqrt(alpha^2-beta^2), delta =
// gamma^3/alpha^2 * var, mu = -delta beta/gamma, so the NIG(mu,delta,
// alpha,beta) law has mean 0 and the requested variance.
NigParams nig_with_variance(double alpha, double beta, double variance);

struct InnovationSpec {
  InnovationKind kind = InnovationKind::Normal;
  double nig_alpha = 2.0;
  double nig_beta = 1.0;
  int intraday_count = 1;  // m
  // Per-intraday-piece variance; 0 means the default 1/m. The daily
  // innovation is the sum of the m pieces (variance m * piece variance).
  double intraday_variance_override = 0.0;

  void validate() const;
  double piece_variance() const {
    return intraday_variance_override > 0.0 ? intraday_variance_override
                                            : 1.0 / intraday_count;
  }
  NigParams piece_nig() const {
    return nig_with_variance(nig_alpha, nig_beta, piece_variance());
  }
  NigParams daily_nig() const;  // convolution of m pieces
  // E[eps^n] of the daily innovation for n in {1,...,4}.
  double daily_moment(int n) const;
  // Counter slots consumed per intraday draw (normal: 1, NIG: 3).
  std::uint64_t draws_per_piece() const {
    return kind == InnovationKind::Nig ? 3 : 1;
  }
};

// One NIG draw via a normal variance-mean mixture with an inverse-Gaussian
// subordinator (Michael-Schucany-Haas). Consumes counters
// [counter, counter+3).
double sample_nig(const NigParams& p, const CounterRng& rng, std::uint64_t counter);

// Simulated intraday panel: T days of m intraday returns each, with the true
// conditional scale path.
struct IntradayPanel {
  int days = 0;            // T
  int intraday_count = 0;  // m
  std::vector<double> intraday_returns;  // row-major T x m
  std::vector<double> daily_returns;     // T; exact sum of the day's row
  std::vector<double> sigma_path;        // T; true sigma_t

  std::span<const double> day(int t) const {
    return {intraday_returns.data() + static_cast<std::size_t>(t) * intraday_count,
            static_cast<std::size_t>(intraday_count)};
  }
  // Within-day cumulative log-price offsets including the day-open point:
  // [0, r_1, r_1+r_2, ..., r_t] (m+1 values).
  std::vector<double> logprice_offsets(int t) const;

  bool has_sigma_path() const { return !sigma_path.empty(); }
};

IntradayPanel simulate_garch(const GarchParams& params, const InnovationSpec& innov,
                             int days, int burnin, std::uint64_t seed,
                             std::uint64_t stream = 0);

IntradayPanel simulate_aparch4(const ApArchParams& params, const InnovationSpec& innov,
                               int days, int burnin, std::uint64_t seed,
                               std::uint64_t stream = 0);

// Columnar CSV (day, intraday index, return, sigma) and a little-endian
// binary cache; both round-trip exactly.
void write_panel_csv(const IntradayPanel& panel, const std::string& path);
IntradayPanel read_panel_csv(const std::string& path);
void write_panel_binary(const IntradayPanel& panel, const std::string& path);
IntradayPanel read_panel_binary(const std::string& path);

}  // namespace fceval
