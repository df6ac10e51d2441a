#pragma once

#include <cstdint>
#include <vector>

#include "kerncollab/config.hpp"
#include "kerncollab/network.hpp"
#include "kerncollab/problem.hpp"

namespace kerncollab {

struct RoundRow {
  long round = 0;
  int client = 0;
  int query_index = 0;
  double reward = 0.0;
  double inst_regret = 0.0;
  double cum_regret_total = 0.0;  // running total over all clients so far
  long comm_scalars_total = 0;    // ledger total at the end of the round
};

/// Everything one simulation produces: the per-round ledger rows, the
/// cumulative regret curve, the communication ledger, and the per-client
/// query trace (grid indices).
struct RunRecord {
  std::vector<RoundRow> rows;            // T * K rows, round-major
  std::vector<double> cum_regret;        // length T, non-decreasing
  std::vector<std::vector<int>> trace;   // K traces of length T
  CommLedger ledger;
  long explored_rounds = 0;              // |A(T)|, or N_T for S-CEPE
  long comm_phase_rounds = 0;            // S-CEPE only
  std::vector<long> inducing_sizes;      // S-CEPE only, |z_i|
};

/// One deterministic simulation of cfg.policy on the given instance.
RunRecord simulate(const ExperimentConfig& cfg, const ProblemInstance& inst,
                   uint64_t run_seed);

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<RunRecord> runs;
  double final_regret_mean = 0.0;
  double final_regret_stderr = 0.0;
  double comm_total_mean = 0.0;
};

/// Runs cfg.mc_runs Monte Carlo repetitions with run seeds
/// seed + 0 .. seed + mc_runs - 1 on the instance derived from cfg.seed.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// The instance a config denotes (shared across its MC runs).
ProblemInstance instance_for(const ExperimentConfig& cfg);

}  // namespace kerncollab
