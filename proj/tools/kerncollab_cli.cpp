#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "kerncollab/config.hpp"
#include "kerncollab/report.hpp"
#include "kerncollab/simulate.hpp"

namespace {

using kerncollab::ExperimentConfig;

struct CommonFlags {
  std::string config_path;
  std::string seed_str;
  std::string out_dir;
  std::string policy;
  bool paper_scale = false;
};

void add_common(CLI::App* sub, CommonFlags& f) {
  sub->add_option("--config", f.config_path, "experiment manifest (key = value)");
  sub->add_option("--seed", f.seed_str, "master seed (u64)");
  sub->add_option("--out", f.out_dir, "output directory");
  sub->add_option("--policy", f.policy, "CEPE|SCEPE|IGPUCB|GPEI|GPPI");
  sub->add_flag("--paper-scale", f.paper_scale, "K=50, T=2000, 30x30 grid");
}

// Precedence: defaults < KERNCOLLAB_SEED < config file < CLI flags.
ExperimentConfig resolve(const CommonFlags& f) {
  ExperimentConfig cfg;
  if (!f.config_path.empty()) {
    cfg = kerncollab::load_config(f.config_path);
  } else {
    uint64_t s = 0;
    if (kerncollab::env_seed(s)) cfg.seed = s;
  }
  if (f.paper_scale) cfg.apply_paper_scale();
  if (!f.policy.empty()) kerncollab::apply_override(cfg, "policy", f.policy);
  if (!f.seed_str.empty()) kerncollab::apply_override(cfg, "seed", f.seed_str);
  if (!f.out_dir.empty()) cfg.out_dir = f.out_dir;
  cfg.validate();
  return cfg;
}

int cmd_run(const CommonFlags& f) {
  const ExperimentConfig cfg = resolve(f);
  std::cout << kerncollab::config_summary(cfg) << '\n';
  const kerncollab::ExperimentResult res = kerncollab::run_experiment(cfg);
  kerncollab::report_run(res, cfg.out_dir);
  std::cout << "final regret " << res.final_regret_mean << " +/- "
            << res.final_regret_stderr << ", comm " << res.comm_total_mean
            << " scalars; outputs in " << cfg.out_dir << '\n';
  return 0;
}

int cmd_compare(const CommonFlags& f, const std::vector<std::string>& names) {
  const ExperimentConfig base = resolve(f);
  std::vector<std::string> wanted = names;
  if (wanted.empty()) wanted = {"CEPE", "IGPUCB", "GPEI", "GPPI"};
  std::vector<ExperimentConfig> configs;
  for (const auto& name : wanted) {
    ExperimentConfig cfg = base;
    cfg.policy = kerncollab::policy_from_string(name);
    configs.push_back(std::move(cfg));
  }
  kerncollab::compare(configs, base.out_dir);
  std::cout << "compared " << configs.size() << " policies; outputs in "
            << base.out_dir << '\n';
  return 0;
}

int cmd_sweep(const CommonFlags& f, const std::vector<double>& q0_list) {
  const ExperimentConfig base = resolve(f);
  std::vector<double> grid = q0_list;
  if (grid.empty()) grid = {0.05, 0.1, 0.2, 0.5, 1.0, 2.0};
  const auto points = kerncollab::sweep_inducing(base, grid, base.out_dir);
  for (const auto& p : points)
    std::cout << "q0=" << p.q0 << " regret_ratio=" << p.regret_ratio
              << " cost_ratio=" << p.cost_ratio << '\n';
  std::cout << "outputs in " << base.out_dir << '\n';
  return 0;
}

int cmd_validate(const CommonFlags& f) {
  const ExperimentConfig cfg = resolve(f);
  std::cout << "ok: " << kerncollab::config_summary(cfg) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kerncollab: collaborative kernelized bandit simulations"};
  app.require_subcommand(1);

  CommonFlags run_f, cmp_f, sweep_f, val_f;
  std::vector<std::string> cmp_policies;
  std::vector<double> q0_list;

  auto* run = app.add_subcommand("run", "run one experiment");
  add_common(run, run_f);

  auto* cmp = app.add_subcommand(
      "compare", "run several policies on one shared instance");
  add_common(cmp, cmp_f);
  cmp->add_option("--policies", cmp_policies,
                  "policies to compare (default: CEPE IGPUCB GPEI GPPI)");

  auto* sweep = app.add_subcommand(
      "sweep-inducing", "S-CEPE q0 sweep against a CEPE reference");
  add_common(sweep, sweep_f);
  sweep->add_option("--q0", q0_list, "q0 grid to sweep");

  auto* val = app.add_subcommand("validate-config", "check a manifest");
  add_common(val, val_f);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_f);
    if (cmp->parsed()) return cmd_compare(cmp_f, cmp_policies);
    if (sweep->parsed()) return cmd_sweep(sweep_f, q0_list);
    if (val->parsed()) return cmd_validate(val_f);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
