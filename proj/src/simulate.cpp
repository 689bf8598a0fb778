#include "fceval/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "fceval/io.hpp"

namespace fceval {

void GarchParams::validate() const {
  if (!(a0 > 0.0)) throw ParameterError("GARCH: a0 must be > 0");
  if (a1 < 0.0 || b < 0.0) throw ParameterError("GARCH: a1, b must be >= 0");
  if (!(a1 + b < 1.0)) throw ParameterError("GARCH: a1 + b must be < 1");
}

void ApArchParams::validate(double eps4) const {
  if (!(omega > 0.0)) throw ParameterError("apARCH: omega must be > 0");
  if (alpha < 0.0 || beta < 0.0) throw ParameterError("apARCH: alpha, beta must be >= 0");
  if (!(1.0 - eps4 * alpha - beta > 0.0))
    throw ParameterError("apARCH: 1 - E[eps^4] alpha - beta must be > 0");
}

double NigParams::gamma() const { return std::sqrt(alpha * alpha - beta * beta); }
double NigParams::mean() const { return mu + delta * beta / gamma(); }
double NigParams::variance() const {
  const double g = gamma();
  return delta * alpha * alpha / (g * g * g);
}
double NigParams::skewness() const {
  return 3.0 * beta / (alpha * std::sqrt(delta * gamma()));
}
double NigParams::kurtosis() const {
  return 3.0 + 3.0 * (1.0 + 4.0 * beta * beta / (alpha * alpha)) / (delta * gamma());
}
double NigParams::third_moment() const {
  return skewness() * std::pow(variance(), 1.5);
}
double NigParams::fourth_moment() const {
  const double v = variance();
  return kurtosis() * v * v;
}

NigParams nig_with_variance(double alpha, double beta, double variance) {
  if (!(alpha > std::fabs(beta)))
    throw ParameterError("NIG: need alpha > |beta|");
  if (!(variance > 0.0)) throw ParameterError("NIG: variance must be > 0");
  const double g = std::sqrt(alpha * alpha - beta * beta);
  NigParams p;
  p.alpha = alpha;
  p.beta = beta;
  p.delta = g * g * g / (alpha * alpha) * variance;
  p.mu = -p.delta * beta / g;
  return p;
}

void InnovationSpec::validate() const {
  if (intraday_count < 1) throw ParameterError("innovations: m must be >= 1");
  if (kind == InnovationKind::Nig && !(nig_alpha > std::fabs(nig_beta)))
    throw ParameterError("NIG: need alpha > |beta|");
  if (intraday_variance_override < 0.0)
    throw ParameterError("innovations: variance override must be positive");
}

NigParams InnovationSpec::daily_nig() const {
  NigParams p = piece_nig();
  p.mu *= intraday_count;
  p.delta *= intraday_count;
  return p;
}

double InnovationSpec::daily_moment(int n) const {
  const double var = intraday_count * piece_variance();
  switch (n) {
    case 1:
      return 0.0;
    case 2:
      return var;
    case 3:
      return kind == InnovationKind::Nig ? daily_nig().third_moment() : 0.0;
    case 4:
      return kind == InnovationKind::Nig ? daily_nig().fourth_moment()
                                         : 3.0 * var * var;
    default:
      throw ParameterError("daily_moment: n must be in 1..4");
  }
}

double sample_nig(const NigParams& p, const CounterRng& rng, std::uint64_t counter) {
  // Inverse-Gaussian subordinator with mean delta/gamma and shape delta^2.
  const double m0 = p.delta / p.gamma();
  const double lambda = p.delta * p.delta;
  const double n1 = rng.normal(counter);
  const double nu = n1 * n1;
  const double y = m0 + (m0 * m0 * nu) / (2.0 * lambda) -
                   (m0 / (2.0 * lambda)) *
                       std::sqrt(4.0 * m0 * lambda * nu + m0 * m0 * nu * nu);
  const double u = rng.uniform(counter + 1);
  const double z = (u <= m0 / (m0 + y)) ? y : (m0 * m0) / y;
  const double n2 = rng.normal(counter + 2);
  return p.mu + p.beta * z + std::sqrt(z) * n2;
}

namespace {

// Shared intraday driver: draws the m pieces of day `day` into `pieces`.
// Counter layout: ((day * m + i) * k + j) with k draws per piece.
void draw_day_pieces(const InnovationSpec& innov, const CounterRng& rng,
                     std::uint64_t day, std::vector<double>& pieces) {
  const int m = innov.intraday_count;
  const std::uint64_t k = innov.draws_per_piece();
  if (innov.kind == InnovationKind::Normal) {
    const double sd = std::sqrt(innov.piece_variance());
    for (int i = 0; i < m; ++i)
      pieces[i] = sd * rng.normal((day * m + i) * k);
  } else {
    const NigParams p = innov.piece_nig();
    for (int i = 0; i < m; ++i)
      pieces[i] = sample_nig(p, rng, (day * m + i) * k);
  }
}

template <typename SigmaInit, typename SigmaUpdate>
IntradayPanel simulate_panel(const InnovationSpec& innov, int days, int burnin,
                             std::uint64_t seed, std::uint64_t stream,
                             SigmaInit sigma_init, SigmaUpdate sigma_update) {
  if (days <= 0) throw ParameterError("simulate: days must be > 0");
  if (burnin < 0) throw ParameterError("simulate: burnin must be >= 0");
  innov.validate();

  const int m = innov.intraday_count;
  IntradayPanel panel;
  panel.days = days;
  panel.intraday_count = m;
  panel.intraday_returns.resize(static_cast<std::size_t>(days) * m);
  panel.daily_returns.resize(days);
  panel.sigma_path.resize(days);

  CounterRng rng(seed, stream);
  std::vector<double> pieces(m);
  double sigma = sigma_init();
  for (int day = 0; day < burnin + days; ++day) {
    draw_day_pieces(innov, rng, static_cast<std::uint64_t>(day), pieces);
    double r = 0.0;
    const int t = day - burnin;
    for (int i = 0; i < m; ++i) {
      const double ri = sigma * pieces[i];
      if (t >= 0) panel.intraday_returns[static_cast<std::size_t>(t) * m + i] = ri;
      r += ri;
    }
    if (t >= 0) {
      panel.daily_returns[t] = r;
      panel.sigma_path[t] = sigma;
    }
    sigma = sigma_update(r, sigma);
  }
  return panel;
}

}  // namespace

std::vector<double> IntradayPanel::logprice_offsets(int t) const {
  std::vector<double> path(intraday_count + 1);
  path[0] = 0.0;
  const auto row = day(t);
  for (int i = 0; i < intraday_count; ++i) path[i + 1] = path[i] + row[i];
  return path;
}

IntradayPanel simulate_garch(const GarchParams& params, const InnovationSpec& innov,
                             int days, int burnin, std::uint64_t seed,
                             std::uint64_t stream) {
  params.validate();
  return simulate_panel(
      innov, days, burnin, seed, stream,
      [&] { return std::sqrt(params.unconditional_variance()); },
      [&](double r, double sigma) {
        return std::sqrt(params.a0 + params.a1 * r * r + params.b * sigma * sigma);
      });
}

IntradayPanel simulate_aparch4(const ApArchParams& params, const InnovationSpec& innov,
                               int days, int burnin, std::uint64_t seed,
                               std::uint64_t stream) {
  innov.validate();
  params.validate(innov.daily_moment(4));
  return simulate_panel(
      innov, days, burnin, seed, stream,
      [&] {
        return std::pow(params.unconditional_sigma4(innov.daily_moment(4)), 0.25);
      },
      [&](double r, double sigma) {
        const double r2 = r * r;
        const double s2 = sigma * sigma;
        return std::pow(params.omega + params.alpha * r2 * r2 + params.beta * s2 * s2,
                        0.25);
      });
}

void write_panel_csv(const IntradayPanel& panel, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot open for writing: " + path);
  os << "day,intraday_index,return,sigma\n";
  for (int t = 0; t < panel.days; ++t)
    for (int i = 0; i < panel.intraday_count; ++i)
      os << t << ',' << i << ','
         << format_double(panel.intraday_returns[static_cast<std::size_t>(t) *
                                                     panel.intraday_count + i])
         << ',' << format_double(panel.sigma_path[t]) << '\n';
}

IntradayPanel read_panel_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open: " + path);
  std::string line;
  if (!std::getline(is, line) || line != "day,intraday_index,return,sigma")
    throw DataError(path + ": bad panel header");
  std::vector<double> returns, sigmas;
  int max_day = -1, max_i = -1;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 4)
      throw DataError(path + ":" + std::to_string(lineno) + ": expected 4 fields");
    const std::string ctx = path + ":" + std::to_string(lineno);
    const int day = static_cast<int>(parse_int(f[0], ctx));
    const int idx = static_cast<int>(parse_int(f[1], ctx));
    returns.push_back(parse_double(f[2], ctx));
    if (idx == 0) sigmas.push_back(parse_double(f[3], ctx));
    max_day = std::max(max_day, day);
    max_i = std::max(max_i, idx);
  }
  IntradayPanel panel;
  panel.days = max_day + 1;
  panel.intraday_count = max_i + 1;
  if (panel.days <= 0 ||
      returns.size() != static_cast<std::size_t>(panel.days) * panel.intraday_count ||
      sigmas.size() != static_cast<std::size_t>(panel.days))
    throw DataError(path + ": inconsistent panel shape");
  panel.intraday_returns = std::move(returns);
  panel.sigma_path = std::move(sigmas);
  panel.daily_returns.resize(panel.days);
  for (int t = 0; t < panel.days; ++t) {
    double r = 0.0;
    for (double ri : panel.day(t)) r += ri;
    panel.daily_returns[t] = r;
  }
  return panel;
}

namespace {
constexpr char kPanelMagic[8] = {'F', 'C', 'E', 'V', 'P', 'N', 'L', '1'};
}

void write_panel_binary(const IntradayPanel& panel, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open for writing: " + path);
  os.write(kPanelMagic, 8);
  const std::int64_t dims[2] = {panel.days, panel.intraday_count};
  os.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  os.write(reinterpret_cast<const char*>(panel.intraday_returns.data()),
           static_cast<std::streamsize>(panel.intraday_returns.size() * sizeof(double)));
  os.write(reinterpret_cast<const char*>(panel.sigma_path.data()),
           static_cast<std::streamsize>(panel.sigma_path.size() * sizeof(double)));
}

IntradayPanel read_panel_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open: " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kPanelMagic, 8) != 0)
    throw DataError(path + ": not a panel cache file");
  std::int64_t dims[2];
  is.read(reinterpret_cast<char*>(dims), sizeof(dims));
  if (!is || dims[0] <= 0 || dims[1] <= 0)
    throw DataError(path + ": bad panel dimensions");
  IntradayPanel panel;
  panel.days = static_cast<int>(dims[0]);
  panel.intraday_count = static_cast<int>(dims[1]);
  panel.intraday_returns.resize(static_cast<std::size_t>(panel.days) *
                                panel.intraday_count);
  panel.sigma_path.resize(panel.days);
  is.read(reinterpret_cast<char*>(panel.intraday_returns.data()),
          static_cast<std::streamsize>(panel.intraday_returns.size() * sizeof(double)));
  is.read(reinterpret_cast<char*>(panel.sigma_path.data()),
          static_cast<std::streamsize>(panel.sigma_path.size() * sizeof(double)));
  if (!is) throw DataError(path + ": truncated panel cache");
  panel.daily_returns.resize(panel.days);
  for (int t = 0; t < panel.days; ++t) {
    double r = 0.0;
    for (double ri : panel.day(t)) r += ri;
    panel.daily_returns[t] = r;
  }
  return panel;
}

}  // namespace fceval
