#pragma once

#include <cstdint>
#include <string>

#include "kerncollab/kernels.hpp"
#include "kerncollab/problem.hpp"

namespace kerncollab {

enum class Policy { CEPE, SCEPE, IGPUCB, GPEI, GPPI };

Policy policy_from_string(const std::string& name);
std::string policy_name(Policy p);

/// Declarative experiment manifest. Desk-scale defaults (K = 10, T = 500,
/// 20x20 grid) suit CI; paper scale (K = 50, T = 2000, 30x30) sits behind
/// apply_paper_scale().
struct ExperimentConfig {
  Policy policy = Policy::CEPE;
  long horizon_T = 500;
  int clients_K = 10;
  uint64_t seed = 1;
  int grid_per_dim = 20;
  BenchmarkBase benchmark = BenchmarkBase::Branin;

  KernelSpec kernel = KernelSpec::se(0.2);
  double lambda = 0.01;
  double noise_var = 0.01;
  double bound_B = 15.0;
  double noise_R = 0.01;
  double delta0 = 0.001;

  // information-gain rate exponent for the default schedule; the SE value
  // is a finite surrogate for the kernel's kappa -> 0 limit
  double kappa = 0.05;
  double schedule_c = 1.0;
  // terminal exploration budget; 0 selects the theorem-shaped schedule
  double n_T = 64.0;

  // S-CEPE
  double epsilon = 0.5;
  double q0 = -1.0;  // < 0 selects default_q0(epsilon, T, K, delta0)

  int mc_runs = 5;
  std::string out_dir = "out";

  void apply_paper_scale();
  void validate() const;  // throws with an actionable message
  double resolved_q0() const;
};

/// Parses a `key = value` manifest ('#' comments, optional [section]
/// headers). Unknown keys are an error. Later keys win within the file.
ExperimentConfig load_config(const std::string& path);

/// Applies one key = value override (same key set as the file format).
void apply_override(ExperimentConfig& cfg, const std::string& key,
                    const std::string& value);

/// Seed fallback: KERNCOLLAB_SEED, when set and the manifest omits a seed.
bool env_seed(uint64_t& out);

std::string config_summary(const ExperimentConfig& cfg);

}  // namespace kerncollab
