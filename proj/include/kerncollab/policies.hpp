#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "kerncollab/gp.hpp"
#include "kerncollab/sparse.hpp"

namespace kerncollab {

/// Deterministic interleaving of exploration and exploitation rounds driven
/// by a non-decreasing sequence N_t: round t explores iff |A(t)| < N_t,
/// where A(t) is the set of past exploration instants.
class EpochSchedule {
 public:
  /// Validates that n_of_t is non-decreasing over 1..horizon. A schedule
  /// that never reaches 1 is accepted but degenerate (never explores).
  EpochSchedule(std::function<double(long)> n_of_t, long horizon);

  /// Consumes round t. Rounds must arrive in order; re-querying the current
  /// round is idempotent (every client of a synchronized round asks once).
  bool is_exploration_round(long t);

  long explored_count() const {
    return static_cast<long>(explored_.size());
  }
  const std::vector<long>& explored() const { return explored_; }
  double n_at(long t) const { return n_of_t_(t); }
  /// True when N_T < 1: such a schedule never explores.
  bool degenerate() const { return degenerate_; }

 private:
  std::function<double(long)> n_of_t_;
  std::vector<long> explored_;
  long last_t_ = 0;
  bool last_was_exploration_ = false;
  bool degenerate_ = false;
};

/// N_t = c * t^{2/(3-kappa)} * (log(t/delta0))^{1/3}
std::function<double(long)> theorem_schedule(double c, double kappa,
                                             double delta0);

/// N_t = n_target * (t/horizon)^{2/(3-kappa)}; terminal value n_target.
std::function<double(long)> scaled_schedule(double n_target, long horizon,
                                            double kappa);

enum class CommIntent { Upload, Silent };
enum class ScepePhase { Explore, Communicate, Exploit };

/// One client's view of the world: its own surrogate plus one surrogate per
/// peer, built exclusively from broadcast exploration data.
struct ClientState {
  int id = 0;
  double alpha = 0.5;
  double bound_B = 15.0;
  /// Exact posteriors, one per client; entry [id] is the client's own.
  std::vector<GpPosterior> gps;
  /// S-CEPE: broadcastable Nystrom models, one per client.
  std::vector<InducingModel> sparse_models;
};

/// mu^{(f_i)}(x) = alpha_i mu^{(h_i)}(x) + ((1-alpha_i)/K) sum_j mu^{(h_j)}(x).
/// The own-client mean contributes with total weight alpha_i + (1-alpha_i)/K.
double personalized_mean(const ClientState& state, const Point& x);
Eigen::VectorXd personalized_mean_at(const ClientState& state,
                                     const PointList& xs);

/// Sparse analogue over the clients' Nystrom models.
Eigen::VectorXd sparse_personalized_mean_at(const ClientState& state,
                                            const PointList& xs);

/// CEPE round: exploration rounds pick the own-GP max-variance grid point
/// and upload; exploitation rounds pick the personalized-mean argmax
/// silently. Returns the chosen grid index.
std::pair<int, CommIntent> cepe_query(ClientState& state, EpochSchedule& sched,
                                      long t, const PointList& grid);

/// S-CEPE round for a precomputed phase. Explore: own max-variance, no
/// upload. Communicate: argmax of the exact local mean, uploading while the
/// client still has inducing pairs left. Exploit: argmax of the sparse
/// personalized mean (constant thereafter).
std::pair<int, CommIntent> scepe_query(ClientState& state, ScepePhase phase,
                                       long comm_step, const PointList& grid);

/// Acquisition cores on a combined personalized surrogate value
/// (mu_f, sigma_f). The sigma = 0 limits: EI -> max(0, mu - f* - eps),
/// PI -> indicator of mu - f* - xi > 0.
double ucb_acquisition(double mu_f, double sigma_f, double beta_t);
double ei_acquisition(double mu_f, double sigma_f, double f_star, double eps);
double pi_acquisition(double mu_f, double sigma_f, double f_star, double xi);

/// State-based forms matching the exact-posterior benign setting: the
/// combined width is the alpha-weighted sum of per-client posterior
/// standard deviations.
double personalized_width(const ClientState& state, const Point& x);
double ucb_acquisition(const ClientState& state, const Point& x,
                       double beta_t);
double ei_acquisition(const ClientState& state, const Point& x, double f_star,
                      double eps);
double pi_acquisition(const ClientState& state, const Point& x, double f_star,
                      double xi);

/// IGP-UCB width multiplier with the gamma_t ~ log t surrogate:
/// beta_t = B + R sqrt(2 (gamma_{t-1} + 1 + log(1/delta))).
double igp_ucb_beta(double bound_B, double noise_R, double delta, long t);

double normal_cdf(double z);
double normal_pdf(double z);

}  // namespace kerncollab
