#include "kerncollab/policies.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>

namespace kerncollab {

EpochSchedule::EpochSchedule(std::function<double(long)> n_of_t, long horizon)
    : n_of_t_(std::move(n_of_t)) {
  if (horizon < 1) throw std::invalid_argument("schedule horizon must be >= 1");
  double prev = -std::numeric_limits<double>::infinity();
  for (long t = 1; t <= horizon; ++t) {
    const double n = n_of_t_(t);
    if (!(n > 0.0))
      throw std::invalid_argument("schedule N_t must be positive");
    if (n < prev)
      throw std::invalid_argument("schedule N_t must be non-decreasing");
    prev = n;
  }
  degenerate_ = n_of_t_(horizon) < 1.0;
  if (degenerate_)
    std::cerr << "warning: degenerate schedule (N_T < 1), no round explores\n";
}

bool EpochSchedule::is_exploration_round(long t) {
  if (t == last_t_) return last_was_exploration_;
  if (t != last_t_ + 1)
    throw std::invalid_argument("schedule rounds must be consumed in order");
  last_t_ = t;
  // strict "<": the paper's worked example (explore 1-3, exploit 4-5,
  // explore 6 under N_t = t^{2/3}) forces the strict comparison
  last_was_exploration_ =
      !degenerate_ && static_cast<double>(explored_.size()) < n_of_t_(t);
  if (last_was_exploration_) explored_.push_back(t);
  return last_was_exploration_;
}

std::function<double(long)> theorem_schedule(double c, double kappa,
                                             double delta0) {
  if (!(c > 0.0)) throw std::invalid_argument("schedule constant must be > 0");
  if (!(delta0 > 0.0 && delta0 < 1.0))
    throw std::invalid_argument("delta0 must lie in (0, 1)");
  if (!(kappa > 0.0 && kappa < 3.0))
    throw std::invalid_argument("kappa out of range");
  return [c, kappa, delta0](long t) {
    const double td = static_cast<double>(t);
    return c * std::pow(td, 2.0 / (3.0 - kappa)) *
           std::cbrt(std::log(td / delta0));
  };
}

std::function<double(long)> scaled_schedule(double n_target, long horizon,
                                            double kappa) {
  if (!(n_target > 0.0))
    throw std::invalid_argument("schedule target must be > 0");
  return [n_target, horizon, kappa](long t) {
    return n_target * std::pow(static_cast<double>(t) /
                                   static_cast<double>(horizon),
                               2.0 / (3.0 - kappa));
  };
}

double personalized_mean(const ClientState& state, const Point& x) {
  const size_t k = state.gps.size();
  if (k == 0) throw std::invalid_argument("personalized_mean: no posteriors");
  double sum = 0.0;
  for (const auto& gp : state.gps) sum += gp.mean(x);
  return state.alpha * state.gps[static_cast<size_t>(state.id)].mean(x) +
         (1.0 - state.alpha) * sum / static_cast<double>(k);
}

Eigen::VectorXd personalized_mean_at(const ClientState& state,
                                     const PointList& xs) {
  const size_t k = state.gps.size();
  if (k == 0) throw std::invalid_argument("personalized_mean: no posteriors");
  Eigen::VectorXd sum =
      Eigen::VectorXd::Zero(static_cast<Eigen::Index>(xs.size()));
  for (const auto& gp : state.gps) sum += gp.mean_at(xs);
  return state.alpha * state.gps[static_cast<size_t>(state.id)].mean_at(xs) +
         (1.0 - state.alpha) / static_cast<double>(k) * sum;
}

Eigen::VectorXd sparse_personalized_mean_at(const ClientState& state,
                                            const PointList& xs) {
  const size_t k = state.sparse_models.size();
  if (k == 0)
    throw std::invalid_argument("sparse personalized mean: no models");
  Eigen::VectorXd sum =
      Eigen::VectorXd::Zero(static_cast<Eigen::Index>(xs.size()));
  for (const auto& m : state.sparse_models) sum += approx_mean_at(m, xs);
  return state.alpha *
             approx_mean_at(state.sparse_models[static_cast<size_t>(state.id)],
                            xs) +
         (1.0 - state.alpha) / static_cast<double>(k) * sum;
}

namespace {

int argmax_lowest_index(const Eigen::VectorXd& v) {
  int best = 0;
  for (int j = 1; j < v.size(); ++j)
    if (v(j) > v(best)) best = j;
  return best;
}

}  // namespace

std::pair<int, CommIntent> cepe_query(ClientState& state, EpochSchedule& sched,
                                      long t, const PointList& grid) {
  if (grid.empty()) throw std::invalid_argument("cepe_query: empty grid");
  if (sched.is_exploration_round(t)) {
    const auto [idx, point] =
        max_variance_point(state.gps[static_cast<size_t>(state.id)], grid);
    return {idx, CommIntent::Upload};
  }
  return {argmax_lowest_index(personalized_mean_at(state, grid)),
          CommIntent::Silent};
}

std::pair<int, CommIntent> scepe_query(ClientState& state, ScepePhase phase,
                                       long comm_step, const PointList& grid) {
  if (grid.empty()) throw std::invalid_argument("scepe_query: empty grid");
  switch (phase) {
    case ScepePhase::Explore: {
      const auto [idx, point] =
          max_variance_point(state.gps[static_cast<size_t>(state.id)], grid);
      return {idx, CommIntent::Silent};
    }
    case ScepePhase::Communicate: {
      const int idx = argmax_lowest_index(
          state.gps[static_cast<size_t>(state.id)].mean_at(grid));
      const auto& own = state.sparse_models[static_cast<size_t>(state.id)];
      const bool has_pair =
          comm_step >= 1 && comm_step <= static_cast<long>(own.z.size());
      return {idx, has_pair ? CommIntent::Upload : CommIntent::Silent};
    }
    case ScepePhase::Exploit:
      return {argmax_lowest_index(sparse_personalized_mean_at(state, grid)),
              CommIntent::Silent};
  }
  throw std::logic_error("unreachable S-CEPE phase");
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * 3.14159265358979323846);
}

double ucb_acquisition(double mu_f, double sigma_f, double beta_t) {
  return mu_f + beta_t * sigma_f;
}

double ei_acquisition(double mu_f, double sigma_f, double f_star, double eps) {
  const double delta = mu_f - f_star - eps;
  if (sigma_f <= 0.0) return std::max(0.0, delta);
  const double z = delta / sigma_f;
  return delta * normal_cdf(z) + sigma_f * normal_pdf(z);
}

double pi_acquisition(double mu_f, double sigma_f, double f_star, double xi) {
  const double delta = mu_f - f_star - xi;
  if (sigma_f <= 0.0) return delta > 0.0 ? 1.0 : 0.0;
  return normal_cdf(delta / sigma_f);
}

double personalized_width(const ClientState& state, const Point& x) {
  const size_t k = state.gps.size();
  double sum = 0.0;
  for (const auto& gp : state.gps) sum += std::sqrt(gp.variance(x));
  return state.alpha *
             std::sqrt(state.gps[static_cast<size_t>(state.id)].variance(x)) +
         (1.0 - state.alpha) * sum / static_cast<double>(k);
}

double ucb_acquisition(const ClientState& state, const Point& x,
                       double beta_t) {
  return ucb_acquisition(personalized_mean(state, x),
                         personalized_width(state, x), beta_t);
}

double ei_acquisition(const ClientState& state, const Point& x, double f_star,
                      double eps) {
  return ei_acquisition(personalized_mean(state, x),
                        personalized_width(state, x), f_star, eps);
}

double pi_acquisition(const ClientState& state, const Point& x, double f_star,
                      double xi) {
  return pi_acquisition(personalized_mean(state, x),
                        personalized_width(state, x), f_star, xi);
}

double igp_ucb_beta(double bound_B, double noise_R, double delta, long t) {
  const double gamma_prev = t > 1 ? std::log(static_cast<double>(t - 1)) : 0.0;
  return bound_B +
         noise_R * std::sqrt(2.0 * (gamma_prev + 1.0 + std::log(1.0 / delta)));
}

}  // namespace kerncollab
