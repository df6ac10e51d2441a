#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "kerncollab/kernels.hpp"

namespace kerncollab {

struct ConfidenceParams {
  double bound_B;  // RKHS norm bound
  double noise_R;  // sub-Gaussian noise scale
  double delta;    // failure probability, in (0, 1)

  void validate() const;
};

/// Confidence width multiplier: B + R * sqrt((2/lambda) * log(2/delta)).
double beta(const ConfidenceParams& params, double lambda);

/// Exact GP posterior over one observation function. Maintains the data,
/// a cached Cholesky factor of (K + lambda I), the solved weight vector
/// alpha = (K + lambda I)^{-1} y, and the running information-gain estimate
/// gamma_hat = sum of sigma^2_{t-1}(x_t) along the appended sequence.
///
/// Single-writer: append must be externally serialized; reads on a
/// quiescent posterior are safe from any thread.
class GpPosterior {
 public:
  // Refactorize rebuilds the Cholesky factor from scratch on every append;
  // Extend grows it by one row (must match the full recompute to 1e-9,
  // falls back to refactorization when the pivot degenerates).
  enum class Update { Refactorize, Extend };

  GpPosterior(KernelSpec kernel, double lambda,
              Update mode = Update::Refactorize);

  void append(const Point& x, double y);

  double mean(const Point& x) const;
  double variance(const Point& x) const;

  Eigen::VectorXd mean_at(const PointList& xs) const;
  Eigen::VectorXd variance_at(const PointList& xs) const;

  int size() const { return static_cast<int>(xs_.size()); }
  double info_gain() const { return info_gain_; }
  double lambda() const { return lambda_; }
  const KernelSpec& kernel() const { return kernel_; }
  const PointList& points() const { return xs_; }
  const Eigen::VectorXd& targets() const { return y_; }
  const Eigen::MatrixXd& chol() const { return chol_; }
  const Eigen::VectorXd& alpha() const { return alpha_; }

 private:
  void refactorize();
  void extend(const Point& x);
  double variance_clamped(double raw) const;

  KernelSpec kernel_;
  double lambda_;
  Update mode_;
  PointList xs_;
  Eigen::VectorXd y_;
  Eigen::MatrixXd chol_;   // lower triangular, t x t
  Eigen::VectorXd alpha_;  // (K + lambda I)^{-1} y
  double info_gain_ = 0.0;
};

/// Grid point of maximal posterior standard deviation; ties broken by the
/// lowest index so runs are reproducible.
std::pair<int, Point> max_variance_point(const GpPosterior& gp,
                                         const PointList& grid);

/// max_x sigma_t(x) <= sqrt(12 * gamma_hat_t / t). Holds whenever the
/// posterior was built by max-variance sampling over this grid.
bool max_std_bound_check(const GpPosterior& gp, const PointList& grid);

}  // namespace kerncollab
