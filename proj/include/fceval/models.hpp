#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "fceval/errors.hpp"
#include "fceval/simulate.hpp"

namespace fceval {

enum class ModelFamily {
  Arch,         // ARCH(p), squared recursion
  Garch11,      // GARCH(1,1)
  Aparch4Arch,  // pure-ARCH apARCH with power 4, order q
  Aparch4,      // apARCH(1,1) with power 4
  Egarch11,     // EGARCH(1,1)
  Cgarch11,     // component GARCH(1,1)
};

struct ModelSpec {
  ModelFamily family = ModelFamily::Garch11;
  int order = 1;               // p for Arch, q for Aparch4Arch
  bool estimate_mean = false;  // constant mean; zero mean otherwise
  // E[eps^4] used in the apARCH fourth-power stationarity margin.
  double eps4 = 3.0;

  std::string label() const;
  // "garch11", "arch1".."archN", "aparch4_11", "aparch4_1".."aparch4_3",
  // "egarch11", "cgarch11"
  static ModelSpec parse(const std::string& name);

  int variance_param_count() const;
  int param_count() const { return variance_param_count() + (estimate_mean ? 1 : 0); }
  // Longest lag the recursion needs before the first likelihood term.
  int max_lag() const;
  int min_window() const;
};

struct FitResult {
  // Natural parameters: [mean (if estimated), variance params...].
  std::vector<double> params;
  double loglik = 0.0;
  bool converged = false;
  int iterations = 0;
};

struct RollingConfig {
  int window = 500;
  int refit_every = 10;

  void validate() const;
};

// Daily-innovation moments used to scale variance forecasts into higher
// conditional-moment forecasts.
struct InnovationMoments {
  double m2 = 1.0;
  double m3 = std::numeric_limits<double>::quiet_NaN();
  double m4 = std::numeric_limits<double>::quiet_NaN();

  static InnovationMoments normal_unit() { return {1.0, 0.0, 3.0}; }
  static InnovationMoments from_spec(const InnovationSpec& spec);
  double moment(int n) const;
};

struct ForecastSeries {
  std::vector<double> values;
  std::vector<std::uint8_t> refit_flags;  // 1 where the model was refitted
  std::string model_label;
  int target_moment = 2;
};

// Gaussian quasi-maximum-likelihood fit by Nelder-Mead over smoothly
// reparameterized coordinates. Deterministic given (spec, data, warm start).
// Non-convergence is reported in the result, never thrown.
FitResult fit_qmle(const ModelSpec& spec, std::span<const double> returns,
                   const std::vector<double>* warm_start = nullptr);

// One-step-ahead conditional-variance forecast given fitted parameters and
// the return history the recursion runs over.
double one_step_sigma2(const ModelSpec& spec, const std::vector<double>& params,
                       std::span<const double> history);

// sigma^n * E[eps^n] from a variance forecast.
double moment_forecast(double sigma2_forecast, int n, const InnovationMoments& moments);

// Rolling one-step-ahead forecasts of the target conditional moment. Refits
// happen every cfg.refit_every steps; between refits the parameters are
// frozen while the recursion state moves with the data.
ForecastSeries rolling_forecasts(const ModelSpec& spec, std::span<const double> series,
                                 const RollingConfig& cfg, int target_moment,
                                 const InnovationMoments& moments);

// True-conditional-moment forecasts from the simulated scale path, aligned
// with rolling forecasts that start after `window` days.
ForecastSeries oracle_forecast(const IntradayPanel& panel, int target_moment,
                               const InnovationMoments& moments, int window = 0);

void write_forecast_csv(const ForecastSeries& series, const std::string& path);

}  // namespace fceval
