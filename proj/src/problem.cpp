#include "kerncollab/problem.hpp"

#include <cmath>
#include <stdexcept>

namespace kerncollab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double branin(double x, double y) {
  const double u = 15.0 * x - 5.0;
  const double v = 15.0 * y;
  const double core = v - 5.1 * u * u / (4.0 * kPi * kPi) + 5.0 * u / kPi - 6.0;
  return -(core * core + (10.0 - 10.0 / (8.0 * kPi)) * std::cos(u) - 44.81) /
         51.95;
}

double sobester(double x, double y) {
  const double a = 6.0 * x - 2.0;
  const double b = 6.0 * y - 2.0;
  return a * a * std::sin(12.0 * x - 4.0) + b * b * std::sin(12.0 * y - 4.0);
}

double BenchmarkFamily::operator()(double x1, double x2) const {
  double u = 1.0, v = 1.0;
  for (int k = 0; k < exp_x; ++k) u *= x1;
  for (int k = 0; k < exp_y; ++k) v *= x2;
  switch (base) {
    case BenchmarkBase::Branin:
      return branin(u, v);
    case BenchmarkBase::Sobester:
      return sobester(u, v);
  }
  throw std::logic_error("unreachable benchmark base");
}

double BenchmarkFamily::operator()(const Point& x) const {
  if (x.size() != 2)
    throw std::invalid_argument("benchmark functions are two-dimensional");
  return (*this)(x(0), x(1));
}

PointList uniform_grid(int per_dim, int d) {
  if (per_dim < 1 || d < 1)
    throw std::invalid_argument("uniform_grid: per_dim and d must be >= 1");
  long total = 1;
  for (int k = 0; k < d; ++k) total *= per_dim;
  PointList grid;
  grid.reserve(static_cast<size_t>(total));
  for (long idx = 0; idx < total; ++idx) {
    Point p(d);
    long rem = idx;
    for (int k = 0; k < d; ++k) {
      const int step = static_cast<int>(rem % per_dim);
      rem /= per_dim;
      p(k) = per_dim == 1 ? 0.5
                          : static_cast<double>(step) /
                                static_cast<double>(per_dim - 1);
    }
    grid.push_back(std::move(p));
  }
  return grid;
}

double ProblemInstance::h_value(int client, const Point& x) const {
  return h[static_cast<size_t>(client)](x);
}

double ProblemInstance::g_value(const Point& x) const {
  double s = 0.0;
  for (const auto& hi : h) s += hi(x);
  return s / static_cast<double>(num_clients);
}

double ProblemInstance::f_value(int client, const Point& x) const {
  const double a = alpha[static_cast<size_t>(client)];
  return a * h_value(client, x) + (1.0 - a) * g_value(x);
}

double ProblemInstance::gap(int client, int grid_index) const {
  return opt_value[static_cast<size_t>(client)] - f_grid(client, grid_index);
}

namespace {

void finalize_instance(ProblemInstance& inst) {
  const int k = inst.num_clients;
  const Eigen::Index g = static_cast<Eigen::Index>(inst.grid.size());
  inst.h_grid.resize(k, g);
  for (int i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < g; ++j)
      inst.h_grid(i, j) = inst.h[static_cast<size_t>(i)](
          inst.grid[static_cast<size_t>(j)]);

  const Eigen::RowVectorXd g_row = inst.h_grid.colwise().mean();
  inst.f_grid.resize(k, g);
  for (int i = 0; i < k; ++i) {
    const double a = inst.alpha[static_cast<size_t>(i)];
    inst.f_grid.row(i) = a * inst.h_grid.row(i) + (1.0 - a) * g_row;
  }

  inst.opt_index.resize(static_cast<size_t>(k));
  inst.opt_value.resize(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) {
    Eigen::Index best = 0;
    inst.f_grid.row(i).maxCoeff(&best);
    inst.opt_index[static_cast<size_t>(i)] = static_cast<int>(best);
    inst.opt_value[static_cast<size_t>(i)] = inst.f_grid(i, best);
  }
}

}  // namespace

ProblemInstance make_instance(uint64_t seed, int num_clients, int grid_per_dim,
                              BenchmarkBase base, double noise_var) {
  if (num_clients < 1)
    throw std::invalid_argument("make_instance: K must be >= 1");
  if (noise_var < 0.0)
    throw std::invalid_argument("make_instance: noise_var must be >= 0");
  ProblemInstance inst;
  inst.num_clients = num_clients;
  inst.dim = 2;
  inst.grid = uniform_grid(grid_per_dim, 2);
  inst.noise_var = noise_var;

  Rng rng(derive_key(seed, /*a=*/0xB0B0, /*b=*/0, /*c=*/0));
  for (int i = 0; i < num_clients; ++i) {
    const int member = rng.uniform_int(9);
    inst.h.push_back(BenchmarkFamily{base, member / 3 + 1, member % 3 + 1});
    inst.alpha.push_back(0.1 + 0.8 * rng.uniform());
  }
  finalize_instance(inst);
  return inst;
}

ProblemInstance default_instance(uint64_t seed) {
  return make_instance(seed, 50, 30, BenchmarkBase::Branin, 0.01);
}

double observe(const ProblemInstance& inst, int client, const Point& x,
               Rng& rng) {
  const double noise =
      inst.noise_var > 0.0 ? std::sqrt(inst.noise_var) * rng.normal() : 0.0;
  return inst.h_value(client, x) + noise;
}

double cumulative_regret(const ProblemInstance& inst,
                         const std::vector<std::vector<int>>& trace) {
  if (static_cast<int>(trace.size()) != inst.num_clients)
    throw std::invalid_argument("cumulative_regret: one trace per client");
  const size_t horizon = trace.empty() ? 0 : trace.front().size();
  double total = 0.0;
  for (int i = 0; i < inst.num_clients; ++i) {
    const auto& row = trace[static_cast<size_t>(i)];
    if (row.size() != horizon)
      throw std::invalid_argument("cumulative_regret: trace length mismatch");
    for (const int j : row) total += inst.gap(i, j);
  }
  return total;
}

}  // namespace kerncollab
