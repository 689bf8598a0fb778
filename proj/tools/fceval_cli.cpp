#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fceval/harness.hpp"
#include "fceval/ingest.hpp"
#include "fceval/io.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw fceval::DataError("cannot open: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path);
  if (!os) throw fceval::DataError("cannot open for writing: " + path);
  os << content;
}

std::vector<double> read_forecast_values(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw fceval::DataError("cannot open: " + path);
  std::string line;
  if (!std::getline(is, line) || line.rfind("index,value", 0) != 0)
    throw fceval::DataError(path + ": expected forecast CSV header 'index,value,...'");
  std::vector<double> values;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = fceval::split_csv_line(line);
    if (f.size() < 2)
      throw fceval::DataError(path + ":" + std::to_string(lineno) + ": short row");
    values.push_back(fceval::parse_double(f[1], path + ":" + std::to_string(lineno)));
  }
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Forecast evaluation with volatility/moment proxies"};
  app.require_subcommand(1);

  // --- simulate ---
  auto* sim = app.add_subcommand("simulate", "Simulate a DGP panel and write it as CSV");
  std::string sim_dgp = "garch", sim_innovation = "normal", sim_out = "panel.csv";
  std::string sim_binary_out;
  int sim_days = 1500, sim_m = 100, sim_burnin = 500;
  std::uint64_t sim_seed = 1, sim_stream = 1;
  double sim_a0 = 0.02, sim_a1 = 0.08, sim_b = 0.85;
  double sim_omega = 0.02, sim_alpha = 0.08, sim_beta = 0.75;
  double sim_nig_alpha = 2.0, sim_nig_beta = 1.0;
  sim->add_option("--dgp", sim_dgp, "garch | aparch4");
  sim->add_option("--days,-T", sim_days, "number of days");
  sim->add_option("-m", sim_m, "intraday returns per day");
  sim->add_option("--burnin", sim_burnin, "burn-in days");
  sim->add_option("--innovation", sim_innovation, "normal | nig");
  sim->add_option("--nig-alpha", sim_nig_alpha);
  sim->add_option("--nig-beta", sim_nig_beta);
  sim->add_option("--seed", sim_seed, "master seed");
  sim->add_option("--stream", sim_stream, "stream / replication index");
  sim->add_option("--a0", sim_a0)->group("GARCH");
  sim->add_option("--a1", sim_a1)->group("GARCH");
  sim->add_option("--b", sim_b)->group("GARCH");
  sim->add_option("--omega", sim_omega)->group("apARCH");
  sim->add_option("--alpha", sim_alpha)->group("apARCH");
  sim->add_option("--beta", sim_beta)->group("apARCH");
  sim->add_option("--out,-o", sim_out, "output panel CSV");
  sim->add_option("--binary-out", sim_binary_out, "optional binary cache path");

  // --- backtest ---
  auto* bt = app.add_subcommand("backtest", "Run an experiment from a key=value config");
  std::string bt_config, bt_out = "result.json", bt_render, bt_render_format = "text";
  bool bt_audit = false;
  bt->add_option("--config,-c", bt_config, "config file")->required();
  bt->add_option("--out,-o", bt_out, "results bundle JSON");
  bt->add_option("--render", bt_render, "also render to this file");
  bt->add_option("--render-format", bt_render_format, "text | svg | html");
  bt->add_flag("--audit", bt_audit, "print the proxy validity / variance audit");

  // --- dm ---
  auto* dm = app.add_subcommand("dm", "DM test of two forecast CSVs against a proxy CSV");
  std::string dm_f1, dm_f2, dm_proxy, dm_loss = "qlike", dm_hac = "compromise_lag1";
  int dm_moment = 2;
  dm->add_option("--forecast1", dm_f1, "forecast CSV for model 1 (x1)")->required();
  dm->add_option("--forecast2", dm_f2, "forecast CSV for model 2 (x2)")->required();
  dm->add_option("--proxy", dm_proxy, "proxy CSV (day,value)")->required();
  dm->add_option("--loss", dm_loss, "mse | qlike");
  dm->add_option("--hac", dm_hac, "lag0 | compromise_lag1 | hstepH | bartlett");
  dm->add_option("--moment", dm_moment, "target moment");

  // --- render ---
  auto* rn = app.add_subcommand("render", "Render a results bundle");
  std::string rn_in, rn_out, rn_format = "text";
  rn->add_option("--in,-i", rn_in, "results bundle JSON")->required();
  rn->add_option("--format,-f", rn_format, "text | svg | html");
  rn->add_option("--out,-o", rn_out, "output file (stdout if omitted)");

  // --- ingest ---
  auto* in = app.add_subcommand("ingest", "Hourly price CSV -> daily returns and RV24");
  std::string in_path, in_out, in_policy = "drop";
  in->add_option("--in,-i", in_path, "price CSV (timestamp,close)")->required();
  in->add_option("--out,-o", in_out, "output CSV (stdout if omitted)");
  in->add_option("--gap-policy", in_policy, "drop | scale");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      fceval::InnovationSpec innov;
      innov.intraday_count = sim_m;
      innov.nig_alpha = sim_nig_alpha;
      innov.nig_beta = sim_nig_beta;
      if (sim_innovation == "nig") innov.kind = fceval::InnovationKind::Nig;
      else if (sim_innovation != "normal")
        throw fceval::ParameterError("innovation must be normal|nig");
      fceval::IntradayPanel panel;
      if (sim_dgp == "garch") {
        panel = fceval::simulate_garch({sim_a0, sim_a1, sim_b}, innov, sim_days,
                                       sim_burnin, sim_seed, sim_stream);
      } else if (sim_dgp == "aparch4") {
        panel = fceval::simulate_aparch4({sim_omega, sim_alpha, sim_beta}, innov,
                                         sim_days, sim_burnin, sim_seed, sim_stream);
      } else {
        throw fceval::ParameterError("dgp must be garch|aparch4");
      }
      fceval::write_panel_csv(panel, sim_out);
      if (!sim_binary_out.empty()) fceval::write_panel_binary(panel, sim_binary_out);
      std::cout << "wrote " << panel.days << " days x " << panel.intraday_count
                << " intraday returns to " << sim_out << "\n";
    } else if (*bt) {
      const auto cfg = fceval::ExperimentConfig::from_file(bt_config);
      const auto result = fceval::run_experiment(cfg);
      write_file(bt_out, fceval::result_to_json(result));
      std::cout << fceval::render_matrix(result, fceval::RenderFormat::Text);
      if (!bt_render.empty())
        write_file(bt_render,
                   fceval::render_matrix(
                       result, fceval::render_format_from_name(bt_render_format)));
      if (bt_audit) std::cout << "\n" << fceval::proxy_validity_audit(cfg).to_text();
      std::cout << "results bundle written to " << bt_out << "\n";
    } else if (*dm) {
      const auto x1 = read_forecast_values(dm_f1);
      const auto x2 = read_forecast_values(dm_f2);
      const auto proxy = fceval::read_proxy_csv(dm_proxy, fceval::ProxyKind::SquaredReturn);
      if (x1.size() != x2.size() || x1.size() != proxy.values.size())
        throw fceval::DataError("dm: forecast and proxy series lengths differ");
      const auto spec = fceval::loss_from_name(dm_loss, dm_moment);
      std::vector<double> d(x1.size());
      for (std::size_t t = 0; t < d.size(); ++t)
        d[t] = fceval::loss_difference(spec, x1[t], x2[t], proxy.values[t]);
      const auto res = fceval::dm_statistic(d, fceval::HacVariant::from_name(dm_hac));
      std::cout << fceval::dm_result_to_json(res, dm_f1, dm_f2, dm_proxy, spec.label)
                << "\n";
    } else if (*rn) {
      const auto result = fceval::result_from_json(read_file(rn_in));
      const auto doc =
          fceval::render_matrix(result, fceval::render_format_from_name(rn_format));
      if (rn_out.empty()) std::cout << doc;
      else write_file(rn_out, doc);
    } else if (*in) {
      const auto report = fceval::parse_prices(in_path);
      if (report.reordered)
        std::cerr << "warning: input rows were out of order; sorted by timestamp\n";
      const auto daily =
          fceval::to_daily(report.records, fceval::gap_policy_from_name(in_policy));
      const auto csv = fceval::daily_to_csv(daily);
      if (in_out.empty()) std::cout << csv;
      else write_file(in_out, csv);
    }
  } catch (const fceval::ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return 2;
  } catch (const fceval::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const fceval::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
