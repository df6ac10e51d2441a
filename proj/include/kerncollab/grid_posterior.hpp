#pragma once

#include <Eigen/Dense>
#include <memory>

#include "kerncollab/kernels.hpp"

namespace kerncollab {

/// Exact GP posterior restricted to queries on a fixed grid, maintained by
/// rank-one conditioning updates: O(|grid|^2) per observation instead of a
/// refactorization. Numerically equivalent to GpPosterior on the same data
/// (verified in tests); used by the every-round baseline policies where a
/// client accumulates hundreds of observations.
class GridPosterior {
 public:
  GridPosterior(std::shared_ptr<const Eigen::MatrixXd> grid_gram,
                double lambda);

  /// Condition on an observation y at grid index j with noise lambda.
  void observe(int index, double y);

  double mean(int index) const { return mu_(index); }
  double variance(int index) const;
  const Eigen::VectorXd& mean_grid() const { return mu_; }
  Eigen::VectorXd variance_grid() const;

  int count() const { return count_; }

 private:
  std::shared_ptr<const Eigen::MatrixXd> grid_gram_;
  double lambda_;
  Eigen::VectorXd mu_;
  Eigen::MatrixXd cov_;
  int count_ = 0;
};

}  // namespace kerncollab
