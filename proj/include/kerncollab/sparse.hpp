#pragma once

#include <Eigen/Dense>
#include <vector>

#include "kerncollab/gp.hpp"
#include "kerncollab/kernels.hpp"
#include "kerncollab/rng.hpp"

namespace kerncollab {

struct SparsityParams {
  double epsilon;  // in (0, 1)
  double q0;
  double chi;      // (1 + epsilon) / (1 - epsilon)

  static SparsityParams make(double epsilon, long horizon_T, long clients_K,
                             double delta0);
};

/// q0 = 6 (1 + eps) log(8 T K / delta0) / (eps^2 (1 - eps))
double default_q0(double epsilon, long horizon_T, long clients_K,
                  double delta0);

/// Nystrom model of one client's posterior mean. (z, w) is the
/// broadcastable representation; the full exploration data is retained by
/// the holder only, for variance evaluation. Immutable once fitted.
struct InducingModel {
  KernelSpec kernel;
  double lambda = 0.0;
  PointList z;
  Eigen::VectorXd w;
  PointList full_x;       // holder-only
  Eigen::VectorXd full_y; // holder-only
  bool fitted = false;

  /// Receiver-side model rebuilt from broadcast (z_s, w_s) pairs alone.
  static InducingModel from_broadcast(KernelSpec kernel, double lambda,
                                      PointList z, Eigen::VectorXd w);
};

/// Bernoulli sampling of inducing points: each historical query x_j is
/// kept with probability min(1, q0 * sigma^2_{N_T}(x_j)), where the
/// variance is under all N_T observations. Weights are left unset.
InducingModel sample_inducing(const GpPosterior& gp, double q0, Rng& rng);

/// w = (lambda K_zz + K_zx K_xz)^{-1} K_zx y
void fit_weights(InducingModel& model);

/// mu_tilde(x) = k_{z,x}^T w; empty z yields 0.
double approx_mean(const InducingModel& model, const Point& x);
Eigen::VectorXd approx_mean_at(const InducingModel& model, const PointList& xs);

/// (1/lambda) (k(x,x) - k_zx^T K_zz^{-1} k_zx
///             + k_zx^T (K_zz + lambda^{-1} K_zx K_xz)^{-1} k_zx)
double approx_variance(const InducingModel& model, const Point& x);

/// beta_tilde = B sqrt(2 lambda / (1 - eps)) + R sqrt(2 log(T / delta))
double sparse_beta(double bound_B, double noise_R, double lambda,
                   double epsilon, long horizon_T, double delta);

/// N_T^(c) = ceil(9 (1 + 1/lambda) q0 gamma_hat); 0 is degenerate.
long comm_phase_length(double q0, double lambda, double gamma_hat);

}  // namespace kerncollab
