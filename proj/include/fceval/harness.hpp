#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "fceval/dm.hpp"
#include "fceval/losses.hpp"
#include "fceval/models.hpp"
#include "fceval/proxies.hpp"
#include "fceval/simulate.hpp"

namespace fceval {

struct ExperimentConfig {
  std::string dgp = "garch";  // "garch" | "aparch4"
  GarchParams garch;
  ApArchParams aparch;
  InnovationSpec innovations;
  int days = 1500;  // T
  int burnin = 500;
  int target_moment = 2;
  std::vector<std::string> models = {"oracle", "garch11", "arch1", "arch2", "arch7"};
  std::vector<ProxyKind> proxies = {ProxyKind::SquaredReturn, ProxyKind::RealizedVariance};
  std::vector<std::string> losses = {"mse", "qlike"};  // "mse" | "qlike"
  RollingConfig rolling;
  int replications = 50;  // nloop
  std::uint64_t master_seed = 1;
  HacVariant hac = HacVariant::compromise_lag1();
  int threads = 0;  // 0 = hardware concurrency

  void validate() const;
  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_lines(const std::vector<std::string>& lines,
                                     const std::string& context);
};

// One (proxy, loss) panel: k x k grid over the model list. entry(row, col) is
// the averaged DM statistic with x1 = models[col], x2 = models[row];
// the grid is antisymmetric and the diagonal is empty.
struct MatrixPanel {
  ProxyKind proxy = ProxyKind::SquaredReturn;
  std::string loss;
  int k = 0;
  std::vector<double> avg_S;                       // k*k, row-major
  std::vector<ZoneVerdict> zones;                  // from the averaged statistic
  std::array<std::vector<double>, 3> red_freq;     // per-level rejection frequency
  std::array<std::vector<double>, 3> green_freq;
  std::vector<int> fallback_count;                 // HAC fallbacks across reps

  double entry(int row, int col) const { return avg_S[row * k + col]; }
  const ZoneVerdict& zone(int row, int col) const { return zones[row * k + col]; }
};

// Raw per-replication DM statistics, per panel (same k x k layout).
struct ReplicationRecord {
  int replication = 0;
  std::vector<std::vector<double>> panel_S;  // [panel][cell]
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<std::string> model_labels;
  std::vector<MatrixPanel> panels;
  std::vector<ReplicationRecord> replications;

  const MatrixPanel* find_panel(ProxyKind proxy, const std::string& loss) const;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

enum class RenderFormat { Text, Svg, Html };
RenderFormat render_format_from_name(const std::string& name);

std::string render_matrix(const ExperimentResult& result, RenderFormat format);

// JSON results bundle (schema documented in the README).
std::string result_to_json(const ExperimentResult& result);
ExperimentResult result_from_json(const std::string& text);
std::string dm_result_to_json(const DMResult& result, const std::string& model1,
                              const std::string& model2, const std::string& proxy,
                              const std::string& loss);

// Executable check of proxy validity and variance reduction: per model pair
// and loss, compares mean and variance of the loss-difference series under
// the daily power proxy r^n versus the intraday proxy.
struct ProxyAuditEntry {
  std::string model1, model2, loss;
  double mean_daily = 0.0;     // across-rep average of per-rep mean(delta), r^n proxy
  double mean_intraday = 0.0;  // same with the intraday proxy
  double se_combined = 0.0;    // MC standard error of the mean difference
  double var_reduction_share = 0.0;  // reps with Var(intraday) < Var(daily)
  bool mean_within_3se = false;
};

struct ProxyAuditReport {
  std::vector<ProxyAuditEntry> entries;
  std::string to_text() const;
};

ProxyAuditReport proxy_validity_audit(const ExperimentConfig& cfg);

// Per-replication seed derivation rule (stream fed to CounterRng).
inline std::uint64_t replication_stream(int replication) {
  return static_cast<std::uint64_t>(replication) + 1;
}

MomentLossSpec loss_from_name(const std::string& name, int target_moment);

}  // namespace fceval
