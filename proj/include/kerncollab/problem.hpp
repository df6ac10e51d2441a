#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "kerncollab/kernels.hpp"
#include "kerncollab/rng.hpp"

namespace kerncollab {

/// Rescaled Branin on [0,1]^2 (maximization convention).
double branin(double x, double y);

/// Two-dimensional extension of the Sobester benchmark on [0,1]^2.
double sobester(double x, double y);

enum class BenchmarkBase { Branin, Sobester };

/// Composite observation family: h(x1, x2) = base(x1^i, x2^j),
/// exponents i, j in {1, 2, 3}.
struct BenchmarkFamily {
  BenchmarkBase base = BenchmarkBase::Branin;
  int exp_x = 1;
  int exp_y = 1;

  double operator()(double x1, double x2) const;
  double operator()(const Point& x) const;
};

/// Uniform grid over [0,1]^d with per_dim points per axis, lowest index
/// varying fastest in the first coordinate.
PointList uniform_grid(int per_dim, int d);

/// Immutable problem instance: K observation functions, personalization
/// weights, grid domain, noise model, and grid oracles for g, f_i and the
/// per-client optima.
struct ProblemInstance {
  int num_clients = 0;
  int dim = 2;
  PointList grid;
  std::vector<BenchmarkFamily> h;
  std::vector<double> alpha;
  double noise_var = 0.0;

  Eigen::MatrixXd h_grid;  // K x |grid|, h_i at every grid point
  Eigen::MatrixXd f_grid;  // K x |grid|, personalized rewards
  std::vector<int> opt_index;
  std::vector<double> opt_value;

  double h_value(int client, const Point& x) const;
  double g_value(const Point& x) const;
  double f_value(int client, const Point& x) const;
  /// f_i(x_i^*) - f_i(grid[j])
  double gap(int client, int grid_index) const;
};

ProblemInstance make_instance(uint64_t seed, int num_clients, int grid_per_dim,
                              BenchmarkBase base, double noise_var);

/// Paper-scale defaults: K = 50, alpha ~ U[0.1, 0.9], h drawn uniformly
/// from the 9-member Branin composite family, 30x30 grid, noise 0.01.
ProblemInstance default_instance(uint64_t seed);

/// Noisy evaluation h_i(x) + N(0, noise_var), drawn from the caller's stream.
double observe(const ProblemInstance& inst, int client, const Point& x,
               Rng& rng);

/// R(T) = sum_i sum_t (f_i(x_i^*) - f_i(x_{i,t})), traces given as grid
/// indices. All traces must share one length.
double cumulative_regret(const ProblemInstance& inst,
                         const std::vector<std::vector<int>>& trace);

}  // namespace kerncollab
