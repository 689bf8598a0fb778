#include "fceval/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "fceval/io.hpp"
#include "fceval/kernels.hpp"

namespace fceval {

using nlohmann::json;

MomentLossSpec loss_from_name(const std::string& name, int target_moment) {
  if (name == "mse") return MomentLossSpec::mse(target_moment);
  if (name == "qlike") return MomentLossSpec::qlike(target_moment);
  throw ParameterError("unknown loss: " + name);
}

void ExperimentConfig::validate() const {
  if (dgp != "garch" && dgp != "aparch4")
    throw ParameterError("dgp must be 'garch' or 'aparch4'");
  if (dgp == "garch") garch.validate();
  innovations.validate();
  if (dgp == "aparch4") aparch.validate(innovations.daily_moment(4));
  if (days - rolling.window < kMinDmLength)
    throw ParameterError("config: need at least " + std::to_string(kMinDmLength) +
                         " evaluation days after the rolling window");
  rolling.validate();
  if (replications < 1) throw ParameterError("config: nloop must be >= 1");
  if (target_moment < 2 || target_moment > 4)
    throw ParameterError("config: target moment must be 2, 3 or 4");
  if (models.empty()) throw ParameterError("config: empty model list");
  for (const auto& m : models)
    if (m != "oracle") ModelSpec::parse(m);  // throws on unknown names
  if (proxies.empty()) throw ParameterError("config: empty proxy list");
  for (ProxyKind p : proxies) {
    const int pm = (p == ProxyKind::SquaredReturn) ? target_moment : proxy_target_moment(p);
    if (pm != target_moment)
      throw ParameterError("config: proxy " + proxy_kind_name(p) +
                           " does not target moment " + std::to_string(target_moment));
  }
  if (losses.empty()) throw ParameterError("config: empty loss list");
  for (const auto& l : losses) {
    loss_from_name(l, target_moment);
    if (l == "qlike" && target_moment % 2 != 0)
      throw ParameterError("config: QLIKE needs a positive proxy; odd moments are not");
  }
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  for (const auto& item : split_csv_line(s)) {
    const auto t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_lines(const std::vector<std::string>& lines,
                                              const std::string& context) {
  ExperimentConfig cfg;
  cfg.proxies.clear();
  cfg.losses.clear();
  cfg.models.clear();
  bool have_proxies = false, have_losses = false, have_models = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string line = trim(lines[i]);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DataError(context + ":" + std::to_string(i + 1) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string ctx = context + ":" + std::to_string(i + 1);
    if (key == "dgp") cfg.dgp = value;
    else if (key == "days" || key == "T") cfg.days = static_cast<int>(parse_int(value, ctx));
    else if (key == "burnin") cfg.burnin = static_cast<int>(parse_int(value, ctx));
    else if (key == "m" || key == "intraday_count")
      cfg.innovations.intraday_count = static_cast<int>(parse_int(value, ctx));
    else if (key == "innovation")
      cfg.innovations.kind = (value == "nig") ? InnovationKind::Nig
                             : (value == "normal")
                                 ? InnovationKind::Normal
                                 : throw ParameterError(ctx + ": innovation must be normal|nig");
    else if (key == "nig_alpha") cfg.innovations.nig_alpha = parse_double(value, ctx);
    else if (key == "nig_beta") cfg.innovations.nig_beta = parse_double(value, ctx);
    else if (key == "intraday_variance")
      cfg.innovations.intraday_variance_override = parse_double(value, ctx);
    else if (key == "target_moment") cfg.target_moment = static_cast<int>(parse_int(value, ctx));
    else if (key == "models") cfg.models = split_list(value), have_models = true;
    else if (key == "proxies") {
      for (const auto& p : split_list(value)) cfg.proxies.push_back(proxy_kind_from_name(p));
      have_proxies = true;
    } else if (key == "losses") cfg.losses = split_list(value), have_losses = true;
    else if (key == "window") cfg.rolling.window = static_cast<int>(parse_int(value, ctx));
    else if (key == "refit_every") cfg.rolling.refit_every = static_cast<int>(parse_int(value, ctx));
    else if (key == "nloop" || key == "replications")
      cfg.replications = static_cast<int>(parse_int(value, ctx));
    else if (key == "seed") cfg.master_seed = static_cast<std::uint64_t>(parse_int(value, ctx));
    else if (key == "hac") cfg.hac = HacVariant::from_name(value);
    else if (key == "threads") cfg.threads = static_cast<int>(parse_int(value, ctx));
    else if (key == "a0") cfg.garch.a0 = parse_double(value, ctx);
    else if (key == "a1") cfg.garch.a1 = parse_double(value, ctx);
    else if (key == "b") cfg.garch.b = parse_double(value, ctx);
    else if (key == "omega") cfg.aparch.omega = parse_double(value, ctx);
    else if (key == "alpha") cfg.aparch.alpha = parse_double(value, ctx);
    else if (key == "beta") cfg.aparch.beta = parse_double(value, ctx);
    else throw DataError(ctx + ": unknown key '" + key + "'");
  }
  if (!have_models) cfg.models = {"oracle", "garch11", "arch1", "arch2", "arch7"};
  if (!have_proxies) {
    cfg.proxies = {ProxyKind::SquaredReturn};
    if (cfg.target_moment == 2) cfg.proxies.push_back(ProxyKind::RealizedVariance);
    if (cfg.target_moment == 3) cfg.proxies.push_back(ProxyKind::RealizedThird);
    if (cfg.target_moment == 4) cfg.proxies.push_back(ProxyKind::CorrectedFourth);
  }
  if (!have_losses)
    cfg.losses = (cfg.target_moment % 2 == 0) ? std::vector<std::string>{"mse", "qlike"}
                                              : std::vector<std::string>{"mse"};
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open config: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(is, line)) lines.push_back(line);
  return from_lines(lines, path);
}

const MatrixPanel* ExperimentResult::find_panel(ProxyKind proxy,
                                                const std::string& loss) const {
  for (const auto& p : panels)
    if (p.proxy == proxy && p.loss == loss) return &p;
  return nullptr;
}

namespace {

IntradayPanel simulate_for(const ExperimentConfig& cfg, int replication) {
  const std::uint64_t stream = replication_stream(replication);
  if (cfg.dgp == "garch")
    return simulate_garch(cfg.garch, cfg.innovations, cfg.days, cfg.burnin,
                          cfg.master_seed, stream);
  return simulate_aparch4(cfg.aparch, cfg.innovations, cfg.days, cfg.burnin,
                          cfg.master_seed, stream);
}

// Forecast series (aligned to days [window, T)) for every configured model.
std::vector<std::vector<double>> all_forecasts(const ExperimentConfig& cfg,
                                               const IntradayPanel& panel,
                                               const InnovationMoments& moments) {
  std::vector<std::vector<double>> out;
  out.reserve(cfg.models.size());
  for (const auto& name : cfg.models) {
    if (name == "oracle") {
      out.push_back(
          oracle_forecast(panel, cfg.target_moment, moments, cfg.rolling.window).values);
    } else {
      ModelSpec spec = ModelSpec::parse(name);
      spec.eps4 = moments.moment(4);
      out.push_back(rolling_forecasts(spec, panel.daily_returns, cfg.rolling,
                                      cfg.target_moment, moments)
                        .values);
    }
  }
  return out;
}

// Proxy values aligned to days [window, T).
std::vector<double> proxy_tail(const ExperimentConfig& cfg, const IntradayPanel& panel,
                               ProxyKind kind) {
  ProxySeries s = (kind == ProxyKind::SquaredReturn && cfg.target_moment != 2)
                      ? daily_power_proxy(panel.daily_returns, cfg.target_moment)
                      : make_proxy(panel, kind);
  return {s.values.begin() + cfg.rolling.window, s.values.end()};
}

std::vector<double> loss_diff_series(const MomentLossSpec& spec,
                                     std::span<const double> x1,
                                     std::span<const double> x2,
                                     std::span<const double> v) {
  std::vector<double> d(v.size());
  if (spec.label == "MSE") {
    kernels::mse_loss_diff(x1, x2, v, d);
  } else {
    for (std::size_t t = 0; t < v.size(); ++t)
      d[t] = loss_difference(spec, x1[t], x2[t], v[t]);
  }
  return d;
}

struct RepOutput {
  // [panel][cell]; NaN marks a degenerate test.
  std::vector<std::vector<double>> panel_S;
  std::vector<std::vector<std::uint8_t>> panel_fallback;
};

RepOutput run_replication(const ExperimentConfig& cfg, int replication) {
  const auto moments = InnovationMoments::from_spec(cfg.innovations);
  const IntradayPanel panel = simulate_for(cfg, replication);
  const auto forecasts = all_forecasts(cfg, panel, moments);
  const int k = static_cast<int>(cfg.models.size());

  RepOutput out;
  for (ProxyKind proxy : cfg.proxies) {
    const auto v = proxy_tail(cfg, panel, proxy);
    for (const auto& loss_name : cfg.losses) {
      const auto spec = loss_from_name(loss_name, cfg.target_moment);
      std::vector<double> S(static_cast<std::size_t>(k) * k, 0.0);
      std::vector<std::uint8_t> fb(static_cast<std::size_t>(k) * k, 0);
      for (int row = 0; row < k; ++row) {
        for (int col = row + 1; col < k; ++col) {
          double s = std::numeric_limits<double>::quiet_NaN();
          bool fallback = false;
          try {
            // x1 = column model, x2 = row model
            const auto d = loss_diff_series(spec, forecasts[col], forecasts[row], v);
            const auto res = dm_statistic(d, cfg.hac);
            s = res.S;
            fallback = res.hac_fallback;
          } catch (const DataError&) {
            // degenerate series; recorded as NaN, never fatal
          }
          S[row * k + col] = s;
          S[col * k + row] = -s;
          fb[row * k + col] = fb[col * k + row] = fallback ? 1 : 0;
        }
      }
      out.panel_S.push_back(std::move(S));
      out.panel_fallback.push_back(std::move(fb));
    }
  }
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const int nrep = cfg.replications;
  std::vector<RepOutput> outputs(nrep);

  int nthreads = cfg.threads > 0 ? cfg.threads
                                 : static_cast<int>(std::thread::hardware_concurrency());
  nthreads = std::clamp(nthreads, 1, nrep);
  if (nthreads == 1) {
    for (int rep = 0; rep < nrep; ++rep) outputs[rep] = run_replication(cfg, rep);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int w = 0; w < nthreads; ++w)
      pool.emplace_back([&] {
        for (int rep = next.fetch_add(1); rep < nrep; rep = next.fetch_add(1))
          outputs[rep] = run_replication(cfg, rep);
      });
    for (auto& th : pool) th.join();
  }

  ExperimentResult result;
  result.config = cfg;
  for (const auto& name : cfg.models)
    result.model_labels.push_back(name == "oracle" ? "oracle"
                                                   : ModelSpec::parse(name).label());
  const int k = static_cast<int>(cfg.models.size());
  const std::size_t cells = static_cast<std::size_t>(k) * k;
  const std::size_t npanels = cfg.proxies.size() * cfg.losses.size();

  // Deterministic reduction in replication order.
  std::size_t panel_idx = 0;
  for (ProxyKind proxy : cfg.proxies) {
    for (const auto& loss_name : cfg.losses) {
      MatrixPanel panel;
      panel.proxy = proxy;
      panel.loss = loss_from_name(loss_name, cfg.target_moment).label;
      panel.k = k;
      panel.avg_S.assign(cells, 0.0);
      panel.fallback_count.assign(cells, 0);
      for (auto& f : panel.red_freq) f.assign(cells, 0.0);
      for (auto& f : panel.green_freq) f.assign(cells, 0.0);
      std::vector<int> finite_count(cells, 0);
      for (int rep = 0; rep < nrep; ++rep) {
        const auto& S = outputs[rep].panel_S[panel_idx];
        const auto& fb = outputs[rep].panel_fallback[panel_idx];
        for (std::size_t c = 0; c < cells; ++c) {
          if (std::isfinite(S[c])) {
            panel.avg_S[c] += S[c];
            ++finite_count[c];
            const auto z = three_zone(S[c]);
            for (int lvl = 0; lvl < 3; ++lvl) {
              panel.red_freq[lvl][c] += z.red[lvl] ? 1.0 : 0.0;
              panel.green_freq[lvl][c] += z.green[lvl] ? 1.0 : 0.0;
            }
          }
          panel.fallback_count[c] += fb[c];
        }
      }
      panel.zones.resize(cells);
      for (std::size_t c = 0; c < cells; ++c) {
        if (finite_count[c] > 0) {
          panel.avg_S[c] /= finite_count[c];
          for (int lvl = 0; lvl < 3; ++lvl) {
            panel.red_freq[lvl][c] /= finite_count[c];
            panel.green_freq[lvl][c] /= finite_count[c];
          }
        }
        panel.zones[c] = three_zone(panel.avg_S[c]);
      }
      result.panels.push_back(std::move(panel));
      ++panel_idx;
    }
  }

  result.replications.reserve(nrep);
  for (int rep = 0; rep < nrep; ++rep) {
    ReplicationRecord rec;
    rec.replication = rep;
    rec.panel_S = std::move(outputs[rep].panel_S);
    rec.panel_S.resize(npanels);
    result.replications.push_back(std::move(rec));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Rendering

RenderFormat render_format_from_name(const std::string& name) {
  if (name == "text") return RenderFormat::Text;
  if (name == "svg") return RenderFormat::Svg;
  if (name == "html") return RenderFormat::Html;
  throw ParameterError("unknown render format: " + name);
}

namespace {

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%+.3f", v);
  return buf;
}

const char* zone_color(const ZoneVerdict& z) {
  switch (z.intensity()) {
    case 3: return "#b2182b";
    case 2: return "#d6604d";
    case 1: return "#f4a582";
    case -1: return "#a6dba0";
    case -2: return "#5aae61";
    case -3: return "#1b7837";
    default: return "#ffffbf";
  }
}

std::string render_text(const ExperimentResult& r) {
  std::ostringstream os;
  os << "Averaged DM statistics over " << r.config.replications
     << " replications (columns: x1, rows: x2 benchmark)\n";
  os << "Legend: [DR]=dark-red [R]=red [lr]=light-red [y]=yellow "
        "[lg]=light-green [G]=green [DG]=dark-green\n";
  const int k = static_cast<int>(r.model_labels.size());
  for (const auto& p : r.panels) {
    os << "\n== proxy=" << proxy_kind_name(p.proxy) << " loss=" << p.loss << " ==\n";
    os << "            ";
    for (const auto& m : r.model_labels) os << m << "  ";
    os << '\n';
    for (int row = 0; row < k; ++row) {
      os << r.model_labels[row] << " | ";
      for (int col = 0; col < k; ++col) {
        if (row == col) {
          os << "    -      ";
          continue;
        }
        const auto& z = p.zone(row, col);
        const char* tag = "y";
        switch (z.intensity()) {
          case 3: tag = "DR"; break;
          case 2: tag = "R"; break;
          case 1: tag = "lr"; break;
          case -1: tag = "lg"; break;
          case -2: tag = "G"; break;
          case -3: tag = "DG"; break;
          default: break;
        }
        os << fixed3(p.entry(row, col)) << "[" << tag << "] ";
      }
      os << '\n';
    }
  }
  return os.str();
}

std::string render_svg(const ExperimentResult& r) {
  const int k = static_cast<int>(r.model_labels.size());
  const int cell_w = 96, cell_h = 36, label_w = 110, header_h = 52;
  const int panel_w = label_w + k * cell_w;
  const int panel_h = header_h + k * cell_h + 16;
  const int width = panel_w + 20;
  const int height = static_cast<int>(r.panels.size()) * panel_h + 20;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\" font-family=\"monospace\" font-size=\"12\">\n";
  int oy = 10;
  for (const auto& p : r.panels) {
    os << "<text x=\"10\" y=\"" << oy + 14 << "\" font-weight=\"bold\">proxy="
       << proxy_kind_name(p.proxy) << " loss=" << p.loss << "</text>\n";
    for (int col = 0; col < k; ++col)
      os << "<text x=\"" << 10 + label_w + col * cell_w + 4 << "\" y=\"" << oy + 34
         << "\">" << r.model_labels[col] << "</text>\n";
    for (int row = 0; row < k; ++row) {
      const int y = oy + header_h + row * cell_h;
      os << "<text x=\"10\" y=\"" << y + 22 << "\">" << r.model_labels[row]
         << "</text>\n";
      for (int col = 0; col < k; ++col) {
        const int x = 10 + label_w + col * cell_w;
        const bool diag = row == col;
        os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell_w
           << "\" height=\"" << cell_h << "\" fill=\""
           << (diag ? "#eeeeee" : zone_color(p.zone(row, col)))
           << "\" stroke=\"#444444\"/>\n";
        os << "<text x=\"" << x + 8 << "\" y=\"" << y + 22 << "\">"
           << (diag ? std::string("-") : fixed3(p.entry(row, col))) << "</text>\n";
      }
    }
    oy += panel_h;
  }
  os << "</svg>\n";
  return os.str();
}

std::string render_html(const ExperimentResult& r) {
  const int k = static_cast<int>(r.model_labels.size());
  std::ostringstream os;
  os << "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>DM test "
        "matrices</title>\n<style>table{border-collapse:collapse;margin:16px}"
        "td,th{border:1px solid #444;padding:4px 10px;font-family:monospace}"
        "</style></head><body>\n";
  for (const auto& p : r.panels) {
    os << "<h3>proxy=" << proxy_kind_name(p.proxy) << " loss=" << p.loss << "</h3>\n";
    os << "<table><tr><th>x2 \\ x1</th>";
    for (const auto& m : r.model_labels) os << "<th>" << m << "</th>";
    os << "</tr>\n";
    for (int row = 0; row < k; ++row) {
      os << "<tr><th>" << r.model_labels[row] << "</th>";
      for (int col = 0; col < k; ++col) {
        if (row == col) {
          os << "<td style=\"background:#eee\">-</td>";
        } else {
          os << "<td style=\"background:" << zone_color(p.zone(row, col)) << "\">"
             << fixed3(p.entry(row, col)) << "</td>";
        }
      }
      os << "</tr>\n";
    }
    os << "</table>\n";
  }
  os << "</body></html>\n";
  return os.str();
}

}  // namespace

std::string render_matrix(const ExperimentResult& result, RenderFormat format) {
  switch (format) {
    case RenderFormat::Text: return render_text(result);
    case RenderFormat::Svg: return render_svg(result);
    case RenderFormat::Html: return render_html(result);
  }
  throw ParameterError("render_matrix: unknown format");
}

// ---------------------------------------------------------------------------
// JSON bundle

namespace {

json config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["dgp"] = cfg.dgp;
  j["days"] = cfg.days;
  j["burnin"] = cfg.burnin;
  j["intraday_count"] = cfg.innovations.intraday_count;
  j["innovation"] = cfg.innovations.kind == InnovationKind::Nig ? "nig" : "normal";
  if (cfg.innovations.kind == InnovationKind::Nig) {
    j["nig_alpha"] = cfg.innovations.nig_alpha;
    j["nig_beta"] = cfg.innovations.nig_beta;
  }
  j["target_moment"] = cfg.target_moment;
  j["models"] = cfg.models;
  json proxies = json::array();
  for (ProxyKind p : cfg.proxies) proxies.push_back(proxy_kind_name(p));
  j["proxies"] = proxies;
  j["losses"] = cfg.losses;
  j["window"] = cfg.rolling.window;
  j["refit_every"] = cfg.rolling.refit_every;
  j["replications"] = cfg.replications;
  j["seed"] = cfg.master_seed;
  j["hac"] = cfg.hac.name();
  if (cfg.dgp == "garch")
    j["garch"] = {{"a0", cfg.garch.a0}, {"a1", cfg.garch.a1}, {"b", cfg.garch.b}};
  else
    j["aparch4"] = {{"omega", cfg.aparch.omega},
                    {"alpha", cfg.aparch.alpha},
                    {"beta", cfg.aparch.beta}};
  return j;
}

}  // namespace

std::string result_to_json(const ExperimentResult& result) {
  json j;
  j["schema"] = "fceval-result-v1";
  j["config"] = config_to_json(result.config);
  j["models"] = result.model_labels;
  json panels = json::array();
  for (const auto& p : result.panels) {
    json pj;
    pj["proxy"] = proxy_kind_name(p.proxy);
    pj["loss"] = p.loss;
    pj["k"] = p.k;
    pj["avg_S"] = p.avg_S;
    json zones = json::array();
    for (const auto& z : p.zones) zones.push_back(z.tag());
    pj["zones"] = zones;
    for (int lvl = 0; lvl < 3; ++lvl) {
      pj["red_freq"][std::to_string(kZoneLevels[lvl])] = p.red_freq[lvl];
      pj["green_freq"][std::to_string(kZoneLevels[lvl])] = p.green_freq[lvl];
    }
    pj["hac_fallback_count"] = p.fallback_count;
    panels.push_back(std::move(pj));
  }
  j["panels"] = panels;
  json reps = json::array();
  for (const auto& rec : result.replications) {
    json rj;
    rj["replication"] = rec.replication;
    rj["panel_S"] = rec.panel_S;
    reps.push_back(std::move(rj));
  }
  j["replications"] = reps;
  return j.dump(2);
}

ExperimentResult result_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("results bundle: ") + e.what());
  }
  if (!j.contains("schema") || j["schema"] != "fceval-result-v1")
    throw DataError("results bundle: unknown schema");
  ExperimentResult r;
  r.model_labels = j["models"].get<std::vector<std::string>>();
  if (j.contains("config")) {
    const auto& c = j["config"];
    if (c.contains("replications")) r.config.replications = c["replications"];
  }
  for (const auto& pj : j["panels"]) {
    MatrixPanel p;
    p.proxy = proxy_kind_from_name(pj["proxy"].get<std::string>());
    p.loss = pj["loss"].get<std::string>();
    p.k = pj["k"];
    p.avg_S = pj["avg_S"].get<std::vector<double>>();
    if (p.avg_S.size() != static_cast<std::size_t>(p.k) * p.k)
      throw DataError("results bundle: panel size mismatch");
    p.zones.reserve(p.avg_S.size());
    for (double s : p.avg_S) p.zones.push_back(three_zone(s));
    if (pj.contains("hac_fallback_count"))
      p.fallback_count = pj["hac_fallback_count"].get<std::vector<int>>();
    r.panels.push_back(std::move(p));
  }
  return r;
}

std::string dm_result_to_json(const DMResult& result, const std::string& model1,
                              const std::string& model2, const std::string& proxy,
                              const std::string& loss) {
  json j;
  j["model1"] = model1;
  j["model2"] = model2;
  j["proxy"] = proxy;
  j["loss"] = loss;
  j["n"] = result.n;
  j["S"] = result.S;
  j["tau2"] = result.tau2;
  j["mean_diff"] = result.mean_diff;
  j["hac_fallback"] = result.hac_fallback;
  j["zone"] = result.zone.tag();
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// Proxy audit: proxy validity and variance reduction, executable form.

ProxyAuditReport proxy_validity_audit(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto moments = InnovationMoments::from_spec(cfg.innovations);
  // Intraday proxy matching the target moment.
  ProxyKind intraday_kind = ProxyKind::RealizedVariance;
  if (cfg.target_moment == 3) intraday_kind = ProxyKind::RealizedThird;
  if (cfg.target_moment == 4) intraday_kind = ProxyKind::CorrectedFourth;

  const int k = static_cast<int>(cfg.models.size());
  const int npairs = k * (k - 1) / 2;
  const int nloss = static_cast<int>(cfg.losses.size());
  const int nrep = cfg.replications;

  // per (pair, loss): per-rep mean under each proxy and variance ordering hits
  std::vector<std::vector<double>> mean_daily(npairs * nloss),
      mean_intraday(npairs * nloss);
  std::vector<int> var_hits(npairs * nloss, 0);

  for (int rep = 0; rep < nrep; ++rep) {
    const IntradayPanel panel = simulate_for(cfg, rep);
    const auto forecasts = all_forecasts(cfg, panel, moments);
    const auto v_daily = proxy_tail(cfg, panel, ProxyKind::SquaredReturn);
    const auto v_intra = proxy_tail(cfg, panel, intraday_kind);
    int slot = 0;
    for (int a = 0; a < k; ++a) {
      for (int b = a + 1; b < k; ++b) {
        for (const auto& loss_name : cfg.losses) {
          const auto spec = loss_from_name(loss_name, cfg.target_moment);
          const auto dd = loss_diff_series(spec, forecasts[a], forecasts[b], v_daily);
          const auto di = loss_diff_series(spec, forecasts[a], forecasts[b], v_intra);
          const double n = static_cast<double>(dd.size());
          const double md = kernels::sum(dd) / n;
          const double mi = kernels::sum(di) / n;
          const double vard = kernels::centered_lag_dot(dd, md, 0) / n;
          const double vari = kernels::centered_lag_dot(di, mi, 0) / n;
          mean_daily[slot].push_back(md);
          mean_intraday[slot].push_back(mi);
          if (vari < vard) ++var_hits[slot];
          ++slot;
        }
      }
    }
  }

  ProxyAuditReport report;
  int slot = 0;
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      for (const auto& loss_name : cfg.losses) {
        ProxyAuditEntry e;
        e.model1 = cfg.models[a];
        e.model2 = cfg.models[b];
        e.loss = loss_name;
        double sum_d = 0.0, sum_i = 0.0;
        for (int rep = 0; rep < nrep; ++rep) {
          sum_d += mean_daily[slot][rep];
          sum_i += mean_intraday[slot][rep];
        }
        e.mean_daily = sum_d / nrep;
        e.mean_intraday = sum_i / nrep;
        // MC standard error of the averaged per-rep mean difference
        double ss = 0.0;
        const double avg_diff = e.mean_daily - e.mean_intraday;
        for (int rep = 0; rep < nrep; ++rep) {
          const double diff = mean_daily[slot][rep] - mean_intraday[slot][rep];
          ss += (diff - avg_diff) * (diff - avg_diff);
        }
        e.se_combined = nrep > 1 ? std::sqrt(ss / (nrep - 1) / nrep) : 0.0;
        e.var_reduction_share = static_cast<double>(var_hits[slot]) / nrep;
        e.mean_within_3se = std::fabs(avg_diff) <= 3.0 * e.se_combined;
        report.entries.push_back(std::move(e));
        ++slot;
      }
    }
  }
  return report;
}

std::string ProxyAuditReport::to_text() const {
  std::ostringstream os;
  os << "pair  loss  mean(delta|r^n)  mean(delta|intraday)  |diff|/SE  "
        "var-reduction-share  within-3SE\n";
  for (const auto& e : entries) {
    const double ratio =
        e.se_combined > 0.0 ? std::fabs(e.mean_daily - e.mean_intraday) / e.se_combined
                            : 0.0;
    os << e.model1 << " vs " << e.model2 << "  " << e.loss << "  " << e.mean_daily
       << "  " << e.mean_intraday << "  " << ratio << "  " << e.var_reduction_share
       << "  " << (e.mean_within_3se ? "yes" : "NO") << '\n';
  }
  return os.str();
}

}  // namespace fceval
