#pragma once

#include <string>
#include <vector>

#include "kerncollab/simulate.hpp"

namespace kerncollab {

/// Fixed schema: round,client,query_index,reward,inst_regret,
/// cum_regret_total,comm_scalars_total
void write_rounds_csv(const std::string& path, const RunRecord& rec);

/// Fixed schema: policy,T,K,seed,final_regret_mean,final_regret_stderr,
/// comm_total
void write_summary_csv(const std::string& path, const ExperimentResult& res);

/// One labeled series per curve; deterministic output bytes.
struct Series {
  std::string label;
  std::vector<double> xs;
  std::vector<double> ys;
};
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<Series>& series);

/// run: one experiment -> per-run rounds CSVs, summary CSV, regret SVG.
void report_run(const ExperimentResult& res, const std::string& out_dir);

/// compare: shared-instance experiments, one cumulative-regret column per
/// policy (means across MC runs) plus a labeled SVG.
struct CompareResult {
  std::vector<std::string> policies;
  std::vector<std::vector<double>> mean_cum_regret;  // per policy, length T
};
CompareResult compare(const std::vector<ExperimentConfig>& configs,
                      const std::string& out_dir);

/// sweep-inducing: S-CEPE across a q0 grid against a CEPE reference with
/// the same N_T. Ratios are (regret_SCEPE/regret_CEPE,
/// cost_CEPE/cost_SCEPE); zero S-CEPE cost reports an infinite ratio.
struct SweepPoint {
  double q0 = 0.0;
  double regret_scepe = 0.0;
  double regret_cepe = 0.0;
  double regret_ratio = 0.0;
  double cost_scepe = 0.0;
  double cost_cepe = 0.0;
  double cost_ratio = 0.0;
};
std::vector<SweepPoint> sweep_inducing(const ExperimentConfig& base,
                                       const std::vector<double>& q0_list,
                                       const std::string& out_dir);

std::string format_double(double v);

}  // namespace kerncollab
