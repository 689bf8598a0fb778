#include "fceval/models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>

#include "fceval/io.hpp"

namespace fceval {

namespace {

constexpr double kSigma2Floor = 1e-12;
constexpr double kPersistenceCap = 0.999;
constexpr double kBadLoglik = 1e100;

inline double sigmoid(double u) { return 1.0 / (1.0 + std::exp(-u)); }
inline double logit(double p) {
  p = std::clamp(p, 1e-12, 1.0 - 1e-12);
  return std::log(p / (1.0 - p));
}
inline double safe_log(double a) { return std::log(std::max(a, 1e-300)); }

}  // namespace

std::string ModelSpec::label() const {
  std::string base;
  switch (family) {
    case ModelFamily::Arch: base = "ARCH(" + std::to_string(order) + ")"; break;
    case ModelFamily::Garch11: base = "GARCH(1,1)"; break;
    case ModelFamily::Aparch4Arch: base = "apARCH(" + std::to_string(order) + ")"; break;
    case ModelFamily::Aparch4: base = "apARCH(1,1)"; break;
    case ModelFamily::Egarch11: base = "EGARCH(1,1)"; break;
    case ModelFamily::Cgarch11: base = "CGARCH(1,1)"; break;
  }
  return base;
}

ModelSpec ModelSpec::parse(const std::string& name) {
  ModelSpec spec;
  if (name == "garch11" || name == "garch") {
    spec.family = ModelFamily::Garch11;
  } else if (name == "egarch11" || name == "egarch") {
    spec.family = ModelFamily::Egarch11;
  } else if (name == "cgarch11" || name == "cgarch") {
    spec.family = ModelFamily::Cgarch11;
  } else if (name == "aparch4_11") {
    spec.family = ModelFamily::Aparch4;
  } else if (name.rfind("aparch4_", 0) == 0) {
    spec.family = ModelFamily::Aparch4Arch;
    spec.order = std::stoi(name.substr(8));
    if (spec.order < 1 || spec.order > 3)
      throw ParameterError("apARCH pure-ARCH order must be 1..3");
  } else if (name.rfind("arch", 0) == 0 && name.size() > 4) {
    spec.family = ModelFamily::Arch;
    spec.order = std::stoi(name.substr(4));
    if (spec.order < 1) throw ParameterError("ARCH order must be >= 1");
  } else {
    throw ParameterError("unknown model: " + name);
  }
  return spec;
}

int ModelSpec::variance_param_count() const {
  switch (family) {
    case ModelFamily::Arch: return order + 1;
    case ModelFamily::Garch11: return 3;
    case ModelFamily::Aparch4Arch: return order + 1;
    case ModelFamily::Aparch4: return 3;
    case ModelFamily::Egarch11: return 4;  // omega, alpha, gamma, beta
    case ModelFamily::Cgarch11: return 5;  // omega, rho, phi, alpha, beta
  }
  return 0;
}

int ModelSpec::max_lag() const {
  switch (family) {
    case ModelFamily::Arch:
    case ModelFamily::Aparch4Arch:
      return order;
    default:
      return 1;
  }
}

int ModelSpec::min_window() const { return std::max(50, 10 * param_count()); }

void RollingConfig::validate() const {
  if (window < 50) throw ParameterError("rolling window must be >= 50");
  if (refit_every < 1) throw ParameterError("refit_every must be >= 1");
}

InnovationMoments InnovationMoments::from_spec(const InnovationSpec& spec) {
  return {spec.daily_moment(2), spec.daily_moment(3), spec.daily_moment(4)};
}

double InnovationMoments::moment(int n) const {
  double v;
  switch (n) {
    case 2: v = m2; break;
    case 3: v = m3; break;
    case 4: v = m4; break;
    default: throw ParameterError("innovation moment order must be 2, 3 or 4");
  }
  if (std::isnan(v)) throw ParameterError("innovation moment E[eps^n] not configured");
  return v;
}

namespace {

// ---------------------------------------------------------------------------
// Parameter transforms: natural <-> unconstrained coordinates. Positivity by
// exp/log, interval constraints by logistic maps, sum constraints by
// stick-breaking over the capped persistence budget.

struct Transform {
  const ModelSpec& spec;

  std::vector<double> to_natural(std::span<const double> u) const {
    std::vector<double> th(u.size());
    std::size_t k = 0;
    if (spec.estimate_mean) th[k] = u[k], ++k;
    switch (spec.family) {
      case ModelFamily::Arch:
      case ModelFamily::Aparch4Arch: {
        const double cap =
            spec.family == ModelFamily::Arch ? kPersistenceCap : kPersistenceCap / spec.eps4;
        th[k] = std::exp(u[k]);  // a0 / omega
        double remaining = cap;
        for (int i = 1; i <= spec.order; ++i) {
          th[k + i] = remaining * sigmoid(u[k + i]);
          remaining -= th[k + i];
        }
        break;
      }
      case ModelFamily::Garch11: {
        th[k] = std::exp(u[k]);
        const double pers = kPersistenceCap * sigmoid(u[k + 1]);
        th[k + 1] = pers * sigmoid(u[k + 2]);  // a1
        th[k + 2] = pers - th[k + 1];          // b
        break;
      }
      case ModelFamily::Aparch4: {
        th[k] = std::exp(u[k]);
        const double pers = kPersistenceCap * sigmoid(u[k + 1]);  // eps4*alpha + beta
        th[k + 1] = pers * sigmoid(u[k + 2]) / spec.eps4;         // alpha
        th[k + 2] = pers * (1.0 - sigmoid(u[k + 2]));             // beta
        break;
      }
      case ModelFamily::Egarch11: {
        th[k] = u[k];                                    // omega
        th[k + 1] = u[k + 1];                            // alpha
        th[k + 2] = u[k + 2];                            // gamma
        th[k + 3] = kPersistenceCap * std::tanh(u[k + 3]);  // beta in (-1,1)
        break;
      }
      case ModelFamily::Cgarch11: {
        th[k] = std::exp(u[k]);                          // omega
        th[k + 1] = kPersistenceCap * sigmoid(u[k + 1]);  // rho
        th[k + 2] = std::exp(u[k + 2]);                  // phi
        const double pers = kPersistenceCap * sigmoid(u[k + 3]);
        th[k + 3] = pers * sigmoid(u[k + 4]);  // alpha
        th[k + 4] = pers - th[k + 3];          // beta
        break;
      }
    }
    return th;
  }

  std::vector<double> to_unconstrained(std::span<const double> th) const {
    std::vector<double> u(th.size());
    std::size_t k = 0;
    if (spec.estimate_mean) u[k] = th[k], ++k;
    switch (spec.family) {
      case ModelFamily::Arch:
      case ModelFamily::Aparch4Arch: {
        const double cap =
            spec.family == ModelFamily::Arch ? kPersistenceCap : kPersistenceCap / spec.eps4;
        u[k] = safe_log(th[k]);
        double remaining = cap;
        for (int i = 1; i <= spec.order; ++i) {
          u[k + i] = logit(th[k + i] / remaining);
          remaining -= th[k + i];
        }
        break;
      }
      case ModelFamily::Garch11: {
        u[k] = safe_log(th[k]);
        const double pers = th[k + 1] + th[k + 2];
        u[k + 1] = logit(pers / kPersistenceCap);
        u[k + 2] = logit(th[k + 1] / std::max(pers, 1e-12));
        break;
      }
      case ModelFamily::Aparch4: {
        u[k] = safe_log(th[k]);
        const double pers = spec.eps4 * th[k + 1] + th[k + 2];
        u[k + 1] = logit(pers / kPersistenceCap);
        u[k + 2] = logit(spec.eps4 * th[k + 1] / std::max(pers, 1e-12));
        break;
      }
      case ModelFamily::Egarch11: {
        u[k] = th[k];
        u[k + 1] = th[k + 1];
        u[k + 2] = th[k + 2];
        u[k + 3] = std::atanh(std::clamp(th[k + 3] / kPersistenceCap, -0.999999, 0.999999));
        break;
      }
      case ModelFamily::Cgarch11: {
        u[k] = safe_log(th[k]);
        u[k + 1] = logit(th[k + 1] / kPersistenceCap);
        u[k + 2] = safe_log(th[k + 2]);
        const double pers = th[k + 3] + th[k + 4];
        u[k + 3] = logit(pers / kPersistenceCap);
        u[k + 4] = logit(th[k + 3] / std::max(pers, 1e-12));
        break;
      }
    }
    return u;
  }
};

// ---------------------------------------------------------------------------
// Variance recursion. Fills sigma2[0..n]; index n is the one-step forecast.
// `vp` are the variance parameters (mean already removed from r).

void run_recursion(const ModelSpec& spec, std::span<const double> vp,
                   std::span<const double> r, std::vector<double>& sigma2) {
  const std::size_t n = r.size();
  sigma2.assign(n + 1, 0.0);
  double var0 = 0.0, m40 = 0.0;
  for (double x : r) {
    var0 += x * x;
    m40 += x * x * x * x;
  }
  var0 = std::max(var0 / std::max<std::size_t>(n, 1), kSigma2Floor);
  m40 = std::max(m40 / std::max<std::size_t>(n, 1), kSigma2Floor);

  switch (spec.family) {
    case ModelFamily::Arch: {
      const int p = spec.order;
      for (std::size_t t = 0; t <= n; ++t) {
        if (t < static_cast<std::size_t>(p)) {
          sigma2[t] = var0;
          continue;
        }
        double s = vp[0];
        for (int i = 1; i <= p; ++i) s += vp[i] * r[t - i] * r[t - i];
        sigma2[t] = std::max(s, kSigma2Floor);
      }
      break;
    }
    case ModelFamily::Garch11: {
      sigma2[0] = var0;
      for (std::size_t t = 1; t <= n; ++t)
        sigma2[t] = std::max(vp[0] + vp[1] * r[t - 1] * r[t - 1] + vp[2] * sigma2[t - 1],
                             kSigma2Floor);
      break;
    }
    case ModelFamily::Aparch4Arch: {
      const int q = spec.order;
      for (std::size_t t = 0; t <= n; ++t) {
        if (t < static_cast<std::size_t>(q)) {
          sigma2[t] = std::sqrt(m40);
          continue;
        }
        double s4 = vp[0];
        for (int i = 1; i <= q; ++i) {
          const double r2 = r[t - i] * r[t - i];
          s4 += vp[i] * r2 * r2;
        }
        sigma2[t] = std::sqrt(std::max(s4, kSigma2Floor));
      }
      break;
    }
    case ModelFamily::Aparch4: {
      double s4 = m40;
      sigma2[0] = std::sqrt(s4);
      for (std::size_t t = 1; t <= n; ++t) {
        const double r2 = r[t - 1] * r[t - 1];
        s4 = std::max(vp[0] + vp[1] * r2 * r2 + vp[2] * s4, kSigma2Floor);
        sigma2[t] = std::sqrt(s4);
      }
      break;
    }
    case ModelFamily::Egarch11: {
      static const double kAbsMean = std::sqrt(2.0 / M_PI);
      double h = safe_log(var0);
      sigma2[0] = var0;
      for (std::size_t t = 1; t <= n; ++t) {
        const double z = r[t - 1] / std::sqrt(sigma2[t - 1]);
        h = vp[0] + vp[3] * h + vp[1] * (std::fabs(z) - kAbsMean) + vp[2] * z;
        h = std::clamp(h, -690.0, 690.0);
        sigma2[t] = std::max(std::exp(h), kSigma2Floor);
      }
      break;
    }
    case ModelFamily::Cgarch11: {
      double q = var0;
      sigma2[0] = var0;
      for (std::size_t t = 1; t <= n; ++t) {
        const double r2 = r[t - 1] * r[t - 1];
        const double q_next =
            vp[0] + vp[1] * (q - vp[0]) + vp[2] * (r2 - sigma2[t - 1]);
        const double s_next =
            q_next + vp[3] * (r2 - q) + vp[4] * (sigma2[t - 1] - q);
        q = std::max(q_next, kSigma2Floor);
        sigma2[t] = std::max(s_next, kSigma2Floor);
      }
      break;
    }
  }
}

double neg_loglik(const ModelSpec& spec, std::span<const double> params,
                  std::span<const double> returns, std::vector<double>& scratch_r,
                  std::vector<double>& scratch_s2) {
  std::size_t k = 0;
  double mu = 0.0;
  if (spec.estimate_mean) mu = params[k], ++k;
  scratch_r.resize(returns.size());
  for (std::size_t i = 0; i < returns.size(); ++i) scratch_r[i] = returns[i] - mu;
  run_recursion(spec, params.subspan(k), scratch_r, scratch_s2);
  double nll = 0.0;
  const std::size_t t0 = static_cast<std::size_t>(spec.max_lag());
  for (std::size_t t = t0; t < returns.size(); ++t) {
    const double s2 = scratch_s2[t];
    nll += 0.5 * (std::log(s2) + scratch_r[t] * scratch_r[t] / s2);
  }
  if (!std::isfinite(nll)) return kBadLoglik;
  return nll;
}

// ---------------------------------------------------------------------------
// Nelder-Mead simplex descent, tolerance 1e-8 on the function-value spread.

struct NmResult {
  std::vector<double> x;
  double f = 0.0;
  bool converged = false;
  int iterations = 0;
};

NmResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                     std::vector<double> x0, double step, double tol, int max_iter) {
  const std::size_t dim = x0.size();
  std::vector<std::vector<double>> pts(dim + 1, x0);
  for (std::size_t i = 0; i < dim; ++i) pts[i + 1][i] += step;
  std::vector<double> fv(dim + 1);
  for (std::size_t i = 0; i <= dim; ++i) fv[i] = f(pts[i]);

  std::vector<std::size_t> idx(dim + 1);
  std::vector<double> centroid(dim), xr(dim), xe(dim), xc(dim);
  NmResult res;
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    for (std::size_t i = 0; i <= dim; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = idx[0], worst = idx[dim], second = idx[dim - 1];
    if (std::fabs(fv[worst] - fv[best]) <= tol * (1.0 + std::fabs(fv[best]))) {
      res.converged = true;
      break;
    }
    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < dim; ++j) centroid[j] += pts[i][j];
    }
    for (double& c : centroid) c /= static_cast<double>(dim);

    for (std::size_t j = 0; j < dim; ++j) xr[j] = centroid[j] + (centroid[j] - pts[worst][j]);
    const double fr = f(xr);
    if (fr < fv[best]) {
      for (std::size_t j = 0; j < dim; ++j) xe[j] = centroid[j] + 2.0 * (centroid[j] - pts[worst][j]);
      const double fe = f(xe);
      if (fe < fr) {
        pts[worst] = xe;
        fv[worst] = fe;
      } else {
        pts[worst] = xr;
        fv[worst] = fr;
      }
    } else if (fr < fv[second]) {
      pts[worst] = xr;
      fv[worst] = fr;
    } else {
      const bool outside = fr < fv[worst];
      const double fref = outside ? fr : fv[worst];
      const auto& base = outside ? xr : pts[worst];
      for (std::size_t j = 0; j < dim; ++j) xc[j] = centroid[j] + 0.5 * (base[j] - centroid[j]);
      const double fc = f(xc);
      if (fc < fref) {
        pts[worst] = xc;
        fv[worst] = fc;
      } else {
        // shrink toward the best point
        for (std::size_t i = 0; i <= dim; ++i) {
          if (i == best) continue;
          for (std::size_t j = 0; j < dim; ++j)
            pts[i][j] = pts[best][j] + 0.5 * (pts[i][j] - pts[best][j]);
          fv[i] = f(pts[i]);
        }
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i <= dim; ++i)
    if (fv[i] < fv[best]) best = i;
  res.x = pts[best];
  res.f = fv[best];
  res.iterations = iter;
  return res;
}

std::vector<double> default_start(const ModelSpec& spec, std::span<const double> returns) {
  double mean = 0.0;
  for (double r : returns) mean += r;
  mean /= std::max<std::size_t>(returns.size(), 1);
  const double mu = spec.estimate_mean ? mean : 0.0;
  double var = 0.0, m4 = 0.0;
  for (double r : returns) {
    const double c = r - mu;
    var += c * c;
    m4 += c * c * c * c;
  }
  var = std::max(var / std::max<std::size_t>(returns.size(), 1), kSigma2Floor);
  m4 = std::max(m4 / std::max<std::size_t>(returns.size(), 1), kSigma2Floor);

  std::vector<double> th;
  if (spec.estimate_mean) th.push_back(mean);
  switch (spec.family) {
    case ModelFamily::Arch: {
      th.push_back(var * 0.7);
      for (int i = 0; i < spec.order; ++i) th.push_back(0.3 / spec.order);
      break;
    }
    case ModelFamily::Garch11:
      th.insert(th.end(), {var * 0.07, 0.08, 0.85});
      break;
    case ModelFamily::Aparch4Arch: {
      th.push_back(m4 * 0.7);
      for (int i = 0; i < spec.order; ++i) th.push_back(0.3 / (spec.eps4 * spec.order));
      break;
    }
    case ModelFamily::Aparch4:
      th.insert(th.end(), {m4 * 0.1, 0.05, 0.9 - spec.eps4 * 0.05});
      break;
    case ModelFamily::Egarch11:
      th.insert(th.end(), {0.1 * safe_log(var), 0.1, 0.0, 0.9});
      break;
    case ModelFamily::Cgarch11:
      th.insert(th.end(), {var, 0.97, 0.03, 0.05, 0.85});
      break;
  }
  return th;
}

}  // namespace

FitResult fit_qmle(const ModelSpec& spec, std::span<const double> returns,
                   const std::vector<double>* warm_start) {
  if (static_cast<int>(returns.size()) < spec.min_window())
    throw ParameterError("fit_qmle: window too short for " + spec.label());

  std::vector<double> start_natural =
      (warm_start && static_cast<int>(warm_start->size()) == spec.param_count())
          ? *warm_start
          : default_start(spec, returns);

  // Degenerate input: no variation to fit against.
  {
    double mean = 0.0;
    for (double r : returns) mean += r;
    mean /= returns.size();
    double var = 0.0;
    for (double r : returns) var += (r - mean) * (r - mean);
    if (var / returns.size() < 1e-14) {
      FitResult fr;
      fr.params = start_natural;
      fr.loglik = -kBadLoglik;
      fr.converged = false;
      return fr;
    }
  }

  const Transform tr{spec};
  std::vector<double> scratch_r, scratch_s2;
  const auto objective = [&](std::span<const double> u) {
    return neg_loglik(spec, tr.to_natural(u), returns, scratch_r, scratch_s2);
  };
  const auto nm = nelder_mead(objective, tr.to_unconstrained(start_natural), 0.25,
                              1e-8, 2000);
  FitResult fr;
  fr.params = tr.to_natural(nm.x);
  fr.loglik = -nm.f;
  fr.converged = nm.converged && nm.f < kBadLoglik / 2;
  fr.iterations = nm.iterations;
  return fr;
}

double one_step_sigma2(const ModelSpec& spec, const std::vector<double>& params,
                       std::span<const double> history) {
  if (static_cast<int>(history.size()) < spec.max_lag())
    throw ParameterError("one_step_sigma2: history too short");
  std::size_t k = 0;
  double mu = 0.0;
  if (spec.estimate_mean) mu = params[k], ++k;
  std::vector<double> r(history.begin(), history.end());
  for (double& x : r) x -= mu;
  std::vector<double> sigma2;
  run_recursion(spec, std::span<const double>(params).subspan(k), r, sigma2);
  return sigma2.back();
}

double moment_forecast(double sigma2_forecast, int n, const InnovationMoments& moments) {
  if (!(sigma2_forecast > 0.0))
    throw ParameterError("moment_forecast: variance forecast must be > 0");
  const double sigma = std::sqrt(sigma2_forecast);
  return std::pow(sigma, n) * moments.moment(n);
}

ForecastSeries rolling_forecasts(const ModelSpec& spec, std::span<const double> series,
                                 const RollingConfig& cfg, int target_moment,
                                 const InnovationMoments& moments) {
  cfg.validate();
  if (static_cast<int>(series.size()) <= cfg.window)
    throw ParameterError("rolling_forecasts: series not longer than window");
  const int n_out = static_cast<int>(series.size()) - cfg.window;

  ForecastSeries out;
  out.model_label = spec.label();
  out.target_moment = target_moment;
  out.values.resize(n_out);
  out.refit_flags.assign(n_out, 0);

  std::vector<double> params;
  for (int s = 0; s < n_out; ++s) {
    const int t = cfg.window + s;  // day being forecast
    const auto window = series.subspan(t - cfg.window, cfg.window);
    if (s % cfg.refit_every == 0) {
      const auto fit = fit_qmle(spec, window, params.empty() ? nullptr : &params);
      // Non-convergence falls back to the previous successful fit.
      if (fit.converged || params.empty()) params = fit.params;
      out.refit_flags[s] = 1;
    }
    const double s2 = one_step_sigma2(spec, params, window);
    out.values[s] = moment_forecast(s2, target_moment, moments);
  }
  return out;
}

ForecastSeries oracle_forecast(const IntradayPanel& panel, int target_moment,
                               const InnovationMoments& moments, int window) {
  if (!panel.has_sigma_path())
    throw ParameterError("oracle_forecast: panel has no true scale path");
  if (window < 0 || window >= panel.days)
    throw ParameterError("oracle_forecast: invalid window");
  ForecastSeries out;
  out.model_label = "oracle";
  out.target_moment = target_moment;
  const double em = moments.moment(target_moment);
  out.values.reserve(panel.days - window);
  for (int t = window; t < panel.days; ++t)
    out.values.push_back(std::pow(panel.sigma_path[t], target_moment) * em);
  out.refit_flags.assign(out.values.size(), 0);
  return out;
}

void write_forecast_csv(const ForecastSeries& series, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot open for writing: " + path);
  os << "index,value,model,refit\n";
  for (std::size_t i = 0; i < series.values.size(); ++i)
    os << i << ',' << format_double(series.values[i]) << ',' << series.model_label
       << ',' << (series.refit_flags.empty() ? 0 : int(series.refit_flags[i])) << '\n';
}

}  // namespace fceval
